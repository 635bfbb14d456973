#include "studymap/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "studymap/export.hpp"
#include "studymap/service.hpp"
#include "studymap/workbench.hpp"

namespace studymap {

namespace {

struct Options {
    std::vector<std::string> inputs;
    std::string output;
    std::string format;
    std::uint64_t seed = 0;
    std::string reference_delimiter;
    std::string stopwords;
    std::optional<std::size_t> min_df;
    std::optional<std::size_t> control_count;
    std::optional<std::size_t> cluster_count;
    bool color_clusters = false;
    double beta = BundleParams{}.beta;
    std::size_t samples = BundleParams{}.samples_per_edge;
    std::size_t leaf_cap = 8;
    std::size_t iterations = ForceParams{}.iterations;
    bool unweighted = false;
    std::string kind;
    std::string expr;
    std::optional<std::size_t> k;
    std::string what;
    std::string log;
    std::string gold;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir;
    std::size_t max_payload = ServiceConfig{}.max_payload_bytes;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.output.empty() || o.output == "-") {
        out << text;
        return;
    }
    std::ofstream file(o.output, std::ios::binary | std::ios::trunc);
    if (!file) throw InvalidArgument("cannot write '" + o.output + "'");
    file << text;
    if (!file) throw InvalidArgument("cannot write '" + o.output + "'");
}

std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

ParseResult load(const Options& o) {
    std::vector<std::filesystem::path> paths(o.inputs.begin(), o.inputs.end());
    IngestOptions ingest{o.reference_delimiter};
    return load_bibtex_files(paths, ingest);
}

WorkbenchConfig workbench_config(const Options& o) {
    WorkbenchConfig config;
    config.with_seed(o.seed);
    if (!o.stopwords.empty()) config.pipeline.stopword_list = load_stopwords(o.stopwords);
    if (o.min_df) config.pipeline.min_document_frequency = *o.min_df;
    if (o.k) config.pipeline.knn_k = *o.k;
    config.projection.control_count = o.control_count;
    config.cluster_count = o.cluster_count;
    config.leaf_cap = o.leaf_cap;
    config.bundles = {o.beta, o.samples};
    config.force.iterations = o.iterations;
    config.force.weighted = !o.unweighted;
    return config;
}

void report(std::ostream& err, const Diagnostics& warnings) {
    for (const auto& w : warnings) err << "warning: " << w.to_string() << '\n';
}

Workbench open_workbench(const Options& o, std::ostream& err) {
    auto parsed = load(o);
    report(err, parsed.warnings);
    return Workbench(std::move(parsed.corpus), workbench_config(o));
}

void run_ingest(const Options& o, std::ostream& out, std::ostream& err) {
    auto parsed = load(o);
    report(err, parsed.warnings);
    Workbench bench(std::move(parsed.corpus), workbench_config(o));
    const auto& corpus = bench.corpus();
    std::size_t raw_refs = 0;
    for (const auto& s : corpus.studies()) raw_refs += s.references.size();
    auto resolved = bench.citations();
    report(err, resolved->warnings);

    const std::size_t warnings = parsed.warnings.size() + resolved->warnings.size();
    if (o.format == "json") {
        emit(o, out, pretty({{"studies", corpus.size()},
                             {"corpus_hash", corpus.content_hash_hex()},
                             {"references", raw_refs},
                             {"distinct_references", resolved->references.size()},
                             {"citations", resolved->links.edges.size()},
                             {"warnings", warnings}}));
        return;
    }
    std::ostringstream text;
    text << corpus.size() << " studies\n"
         << raw_refs << " references (" << resolved->references.size() << " distinct)\n"
         << resolved->links.edges.size() << " citations between studies\n"
         << warnings << " warnings\n";
    emit(o, out, text.str());
}

void run_map(const Options& o, std::ostream& out, std::ostream& err) {
    auto bench = open_workbench(o, err);
    auto map = bench.map();
    if (o.format == "svg") {
        emit(o, out, map_svg(*map, o.color_clusters ? bench.clusters().get() : nullptr));
    } else {
        emit(o, out, pretty(map_json(*map)));
    }
    err << "neighborhood preservation " << map->quality << "\n";
    report(err, bench.warnings());
}

void run_bundles(const Options& o, std::ostream& out, std::ostream& err) {
    auto bench = open_workbench(o, err);
    auto layout = bench.bundles();
    emit(o, out, o.format == "svg" ? bundles_svg(*layout) : pretty(bundles_json(*layout)));
    report(err, bench.warnings());
}

void run_network(const Options& o, std::ostream& out, std::ostream& err) {
    auto bench = open_workbench(o, err);
    auto graph = bench.graph();
    auto layout = bench.network();
    emit(o, out, o.format == "svg" ? network_svg(*graph, *layout) : pretty(network_json(*graph, *layout)));
    report(err, bench.warnings());
}

void run_overlay(const Options& o, std::ostream& out, std::ostream& err) {
    auto bench = open_workbench(o, err);
    Json payload;
    if (o.kind == "clusters") {
        payload = cluster_overlay(*bench.clusters(), *bench.map());
    } else if (o.kind == "expression") {
        if (o.expr.empty()) throw InvalidArgument("--kind expression needs --expr");
        payload = expression_overlay(expression_frequency(bench.corpus(), o.expr), bench.corpus().ids());
    } else {
        payload = knn_overlay(*bench.matrix(), bench.config().pipeline.knn_k);
    }
    emit(o, out, pretty(payload));
    report(err, bench.warnings());
}

void run_export(const Options& o, std::ostream& out, std::ostream& err) {
    auto bench = open_workbench(o, err);
    Json payload;
    if (o.what == "matrix") payload = matrix_json(*bench.matrix());
    else if (o.what == "hierarchy") payload = hierarchy_json(*bench.hierarchy());
    else payload = clusters_json(*bench.clusters(), bench.corpus().ids());
    emit(o, out, pretty(payload));
    report(err, bench.warnings());
}

void run_metrics(const Options& o, std::ostream& out) {
    const auto session = read_session_log(read_text(o.log));
    const auto gold = GoldStandard::from_included(session.ids(), parse_gold_file(read_text(o.gold)));
    const auto metrics = compute_metrics(session, gold);
    emit(o, out, o.format == "csv" ? metrics_to_csv(metrics) : metrics_to_json(metrics) + "\n");
}

void run_table(const Options& o, std::ostream& out) {
    emit(o, out, export_decision_table(read_session_log(read_text(o.log))));
}

void run_serve(const Options& o, std::ostream& out) {
    ServiceConfig config;
    config.max_payload_bytes = o.max_payload;
    config.workbench.with_seed(o.seed);
    if (!o.data_dir.empty()) config.data_dir = o.data_dir;
    Service service(std::move(config));
    HttpServer server(service, o.host, o.port);
    out << "listening on http://" << o.host << ':' << server.port() << std::endl;
    server.run();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Visual text mining workbench for study selection"};
    app.name("studymap");
    app.require_subcommand(1);
    Options o;

    auto corpus_command = [&](const std::string& name, const std::string& about,
                              const std::vector<std::string>& formats) {
        auto* cmd = app.add_subcommand(name, about);
        cmd->add_option("inputs", o.inputs, "bibtex files")->required();
        cmd->add_option("-o,--output", o.output, "output file (default stdout)");
        cmd->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember(formats))
            ->default_str(formats.front());
        cmd->add_option("--seed", o.seed, "seed for every randomized step");
        cmd->add_option("--reference-delimiter", o.reference_delimiter, "separator inside the references field");
        cmd->add_option("--stopwords", o.stopwords, "stopword file, one term per line");
        cmd->add_option("--min-df", o.min_df, "minimum document frequency of a term");
        return cmd;
    };

    corpus_command("ingest", "parse bibtex and report the corpus", {"text", "json"});
    auto* map = corpus_command("map", "document map layout", {"json", "svg"});
    map->add_option("--controls", o.control_count, "number of control points");
    map->add_option("--clusters", o.cluster_count, "number of clusters for SVG coloring");
    map->add_flag("--color-clusters", o.color_clusters, "color SVG points by cluster and print topics");
    auto* bundles = corpus_command("bundles", "edge bundles layout", {"json", "svg"});
    bundles->add_option("--beta", o.beta, "bundling strength in [0, 1]");
    bundles->add_option("--samples", o.samples, "samples per edge");
    bundles->add_option("--leaf-cap", o.leaf_cap, "maximum studies per hierarchy leaf");
    auto* network = corpus_command("network", "citation network layout", {"json", "svg"});
    network->add_option("--iterations", o.iterations, "force layout steps");
    network->add_flag("--unweighted", o.unweighted, "treat every edge with weight 1");
    auto* overlay = corpus_command("overlay", "cluster, expression or knn overlay payload", {"json"});
    overlay->add_option("--kind", o.kind, "overlay kind")->required()->check(CLI::IsMember({"clusters", "expression", "knn"}));
    overlay->add_option("--expr", o.expr, "expression for --kind expression");
    overlay->add_option("--k", o.k, "neighbors for --kind knn");
    overlay->add_option("--clusters", o.cluster_count, "number of clusters");
    auto* exp = corpus_command("export", "matrix, hierarchy or cluster export", {"json"});
    exp->add_option("--what", o.what, "what to export")->required()->check(CLI::IsMember({"matrix", "hierarchy", "clusters"}));
    exp->add_option("--clusters", o.cluster_count, "number of clusters");
    exp->add_option("--leaf-cap", o.leaf_cap, "maximum studies per hierarchy leaf");

    auto* metrics = app.add_subcommand("metrics", "score a session log against a gold standard");
    metrics->add_option("--log", o.log, "session log (JSON lines)")->required();
    metrics->add_option("--gold", o.gold, "included study ids, one per line")->required();
    metrics->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}))->default_str("json");
    metrics->add_option("-o,--output", o.output, "output file (default stdout)");

    auto* table = app.add_subcommand("table", "decision table (CSV) from a session log");
    table->add_option("--log", o.log, "session log (JSON lines)")->required();
    table->add_option("-o,--output", o.output, "output file (default stdout)");

    auto* serve_cmd = app.add_subcommand("serve", "run the HTTP/JSON service");
    serve_cmd->add_option("--host", o.host, "bind address");
    serve_cmd->add_option("--port", o.port, "port (0 picks a free one)");
    serve_cmd->add_option("--data-dir", o.data_dir, "persist projects below this directory");
    serve_cmd->add_option("--max-payload", o.max_payload, "largest accepted request body in bytes");
    serve_cmd->add_option("--seed", o.seed, "default seed for new projects");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kExitOk;
        const auto chosen = app.get_subcommands();
        err << (chosen.empty() ? app.help() : chosen.front()->help());
        return kExitInputError;
    }

    try {
        if (o.format.empty()) o.format = app.got_subcommand("ingest") ? "text" : "json";
        if (app.got_subcommand("ingest")) run_ingest(o, out, err);
        else if (app.got_subcommand("map")) run_map(o, out, err);
        else if (app.got_subcommand("bundles")) run_bundles(o, out, err);
        else if (app.got_subcommand("network")) run_network(o, out, err);
        else if (app.got_subcommand("overlay")) run_overlay(o, out, err);
        else if (app.got_subcommand("export")) run_export(o, out, err);
        else if (app.got_subcommand("metrics")) run_metrics(o, out);
        else if (app.got_subcommand("table")) run_table(o, out);
        else run_serve(o, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << " (entry " << e.entry_index() << ", byte " << e.offset() << ")\n";
        return kExitInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    }
    return kExitOk;
}

}  // namespace studymap
