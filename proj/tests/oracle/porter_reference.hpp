// Frozen reference stems produced by an independent Porter implementation
// (NLTK PorterStemmer, ORIGINAL_ALGORITHM mode). Regenerate with
// tests/oracle/gen_porter_reference.py.
#pragma once

#include <string_view>
#include <utility>

namespace studymap::test {

inline constexpr std::pair<std::string_view, std::string_view> kRandomWordStems[] = {
    {"references", "refer"},
    {"aiming", "aim"},
    {"query", "queri"},
    {"represents", "repres"},
    {"changes", "chang"},
    {"named", "name"},
    {"medical", "medic"},
    {"see", "see"},
    {"resolves", "resolv"},
    {"humans", "human"},
    {"includes", "includ"},
    {"undecided", "undecid"},
    {"provide", "provid"},
    {"states", "state"},
    {"error", "error"},
    {"lines", "line"},
    {"whereas", "wherea"},
    {"braces", "brace"},
    {"abstracts", "abstract"},
    {"excludes", "exclud"},
    {"helping", "help"},
    {"tool", "tool"},
    {"different", "differ"},
    {"possible", "possibl"},
    {"cli", "cli"},
    {"petersen", "petersen"},
    {"fixed", "fix"},
    {"fetching", "fetch"},
    {"provides", "provid"},
    {"refs", "ref"},
    {"empirically", "empir"},
    {"did", "did"},
    {"add", "add"},
    {"convention", "convent"},
    {"current", "current"},
    {"coincide", "coincid"},
    {"encodes", "encod"},
    {"structural", "structur"},
    {"understood", "understood"},
    {"being", "be"},
    {"records", "record"},
    {"every", "everi"},
    {"version", "version"},
    {"adapted", "adapt"},
    {"methods", "method"},
    {"semicolon", "semicolon"},
    {"group", "group"},
    {"argument", "argument"},
    {"decisions", "decis"},
    {"collection", "collect"},
    {"except", "except"},
    {"evaluation", "evalu"},
    {"mendon", "mendon"},
    {"case", "case"},
    {"leaf", "leaf"},
    {"changing", "chang"},
    {"elaborated", "elabor"},
    {"stored", "store"},
    {"retrieved", "retriev"},
    {"sid", "sid"},
    {"linkage", "linkag"},
    {"connection", "connect"},
    {"exclusively", "exclus"},
    {"projectionconfig", "projectionconfig"},
    {"answer", "answer"},
    {"often", "often"},
    {"offered", "offer"},
    {"using", "us"},
    {"malformed", "malform"},
    {"selected", "select"},
    {"repel", "repel"},
    {"component", "compon"},
    {"fingerprint", "fingerprint"},
    {"could", "could"},
    {"color", "color"},
    {"last", "last"},
    {"maldonado", "maldonado"},
    {"excluded", "exclud"},
    {"mentioned", "mention"},
    {"recorded", "record"},
    {"against", "against"},
    {"attractive", "attract"},
    {"radical", "radic"},
    {"demand", "demand"},
    {"file", "file"},
    {"suggested", "suggest"},
    {"highlight", "highlight"},
    {"frontend", "frontend"},
    {"duplicate", "duplic"},
    {"ingest", "ingest"},
    {"mapping", "map"},
    {"thus", "thu"},
    {"variable", "variabl"},
    {"validate", "valid"},
    {"third", "third"},
    {"users", "user"},
    {"further", "further"},
    {"maps", "map"},
    {"proceedings", "proceed"},
    {"acceleration", "acceler"},
    {"reproduction", "reproduct"},
    {"constrained", "constrain"},
    {"cliconfig", "cliconfig"},
    {"kind", "kind"},
    {"multilevel", "multilevel"},
    {"indexing", "index"},
    {"defaults", "default"},
    {"interpretation", "interpret"},
    {"additionally", "addition"},
    {"clients", "client"},
    {"compared", "compar"},
    {"prepare", "prepar"},
    {"access", "access"},
    {"design", "design"},
    {"carry", "carri"},
    {"classification", "classif"},
    {"coordinate", "coordin"},
    {"previously", "previous"},
    {"obtain", "obtain"},
    {"none", "none"},
    {"orientation", "orient"},
    {"too", "too"},
    {"technology", "technologi"},
    {"performing", "perform"},
    {"consumed", "consum"},
    {"initialized", "initi"},
    {"paper", "paper"},
    {"uniqueness", "uniqu"},
    {"norm", "norm"},
    {"default", "default"},
    {"revis", "revi"},
    {"snapshots", "snapshot"},
    {"centroids", "centroid"},
    {"cut", "cut"},
    {"phase", "phase"},
    {"relied", "reli"},
    {"obtained", "obtain"},
    {"pruning", "prune"},
    {"beta", "beta"},
    {"less", "less"},
    {"keele", "keel"},
    {"relevant", "relev"},
    {"elimination", "elimin"},
    {"update", "updat"},
    {"barnes", "barn"},
    {"effectiveness", "effect"},
    {"replicate", "replic"},
    {"limit", "limit"},
    {"precision", "precis"},
    {"built", "built"},
    {"might", "might"},
    {"put", "put"},
    {"restored", "restor"},
    {"invariant", "invari"},
    {"min", "min"},
    {"cosines", "cosin"},
    {"trials", "trial"},
    {"documentmaplayout", "documentmaplayout"},
    {"vdm", "vdm"},
    {"pdf", "pdf"},
    {"docs", "doc"},
    {"holding", "hold"},
    {"paulo", "paulo"},
    {"formula", "formula"},
    {"step", "step"},
    {"canvas", "canva"},
    {"clinical", "clinic"},
    {"labeling", "label"},
    {"matches", "match"},
    {"tabular", "tabular"},
    {"combine", "combin"},
    {"continue", "continu"},
    {"bundlededge", "bundlededg"},
    {"panels", "panel"},
    {"serl", "serl"},
    {"belong", "belong"},
    {"determine", "determin"},
    {"widely", "wide"},
    {"offline", "offlin"},
    {"seeds", "seed"},
    {"center", "center"},
    {"moreover", "moreov"},
    {"years", "year"},
    {"indicator", "indic"},
    {"length", "length"},
    {"graphs", "graph"},
    {"canonical", "canon"},
    {"viewstate", "viewstat"},
    {"state", "state"},
    {"get", "get"},
    {"novel", "novel"},
    {"facilitate", "facilit"},
    {"status", "statu"},
    {"simple", "simpl"},
    {"target", "target"},
    {"eliminating", "elimin"},
    {"weight", "weight"},
    {"connected", "connect"},
    {"workbench", "workbench"},
    {"task", "task"},
};

inline constexpr std::pair<std::string_view, std::string_view> kClassicWordStems[] = {
    {"caresses", "caress"},
    {"ponies", "poni"},
    {"ties", "ti"},
    {"caress", "caress"},
    {"cats", "cat"},
    {"feed", "feed"},
    {"agreed", "agre"},
    {"plastered", "plaster"},
    {"bled", "bled"},
    {"motoring", "motor"},
    {"sing", "sing"},
    {"conflated", "conflat"},
    {"troubled", "troubl"},
    {"sized", "size"},
    {"hopping", "hop"},
    {"tanned", "tan"},
    {"falling", "fall"},
    {"hissing", "hiss"},
    {"fizzed", "fizz"},
    {"failing", "fail"},
    {"filing", "file"},
    {"happy", "happi"},
    {"sky", "sky"},
    {"relational", "relat"},
    {"conditional", "condit"},
    {"rational", "ration"},
    {"valenci", "valenc"},
    {"hesitanci", "hesit"},
    {"digitizer", "digit"},
    {"conformabli", "conform"},
    {"radicalli", "radic"},
    {"differentli", "differ"},
    {"vileli", "vile"},
    {"analogousli", "analog"},
    {"vietnamization", "vietnam"},
    {"predication", "predic"},
    {"operator", "oper"},
    {"feudalism", "feudal"},
    {"decisiveness", "decis"},
    {"hopefulness", "hope"},
    {"callousness", "callous"},
    {"formaliti", "formal"},
    {"sensitiviti", "sensit"},
    {"sensibiliti", "sensibl"},
    {"triplicate", "triplic"},
    {"formative", "form"},
    {"formalize", "formal"},
    {"electriciti", "electr"},
    {"electrical", "electr"},
    {"hopeful", "hope"},
    {"goodness", "good"},
    {"revival", "reviv"},
    {"allowance", "allow"},
    {"inference", "infer"},
    {"airliner", "airlin"},
    {"gyroscopic", "gyroscop"},
    {"adjustable", "adjust"},
    {"defensible", "defens"},
    {"irritant", "irrit"},
    {"replacement", "replac"},
    {"adjustment", "adjust"},
    {"dependent", "depend"},
    {"adoption", "adopt"},
    {"homologou", "homolog"},
    {"communism", "commun"},
    {"activate", "activ"},
    {"angulariti", "angular"},
    {"homologous", "homolog"},
    {"effective", "effect"},
    {"bowdlerize", "bowdler"},
    {"probate", "probat"},
    {"rate", "rate"},
    {"cease", "ceas"},
    {"controll", "control"},
    {"roll", "roll"},
    {"generalizations", "gener"},
    {"oscillators", "oscil"},
    {"testing", "test"},
    {"tester", "tester"},
    {"tests", "test"},
};

}  // namespace studymap::test
