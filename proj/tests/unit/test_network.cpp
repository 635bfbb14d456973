#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "studymap/network.hpp"
#include "support/fixtures.hpp"

using namespace studymap;
using studymap::test::study;

namespace {

std::string pool_reference(std::size_t j) {
    return "Ref " + test::pseudo_word(15 + j / 40, j % 40) + " " + test::pseudo_word(15 + j / 40, 40 + j % 2);
}

struct RandomCorpus {
    Corpus corpus;
    std::vector<std::set<std::size_t>> pool_refs;  // which pool references each study lists
    std::set<std::pair<std::size_t, std::size_t>> citations;
};

RandomCorpus random_reference_corpus(Rng& rng, std::size_t n, std::size_t pool, double cite_rate) {
    RandomCorpus out;
    std::vector<std::string> titles;
    for (std::size_t i = 0; i < n; ++i) titles.push_back("Paper " + std::to_string(i) + " on " + test::pseudo_word(5, i % 40) + " " + test::pseudo_word(6, i / 40));
    std::vector<StudyRecord> studies;
    out.pool_refs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> refs;
        for (std::size_t r = rng.below(6); r > 0; --r) {
            const std::size_t j = rng.below(pool);
            out.pool_refs[i].insert(j);
            refs.push_back(pool_reference(j));
        }
        if (rng.uniform() < cite_rate) {
            const std::size_t j = rng.below(n);
            if (j != i) {
                out.citations.emplace(i, j);
                refs.push_back("X. " + titles[j] + ". 2010");
            }
        }
        studies.push_back(study("s" + std::to_string(i), titles[i], "", {}, refs));
    }
    out.corpus = Corpus(studies);
    return out;
}

CitationGraph graph_of(const Corpus& corpus) {
    auto resolved = resolve_citations(corpus, canonicalize_references(corpus));
    return build_citation_graph(corpus, resolved.references, resolved.links);
}

CitationGraph pair_graph(std::size_t extra_isolated = 0) {
    CitationGraph g;
    g.study_nodes = {"a", "b"};
    for (std::size_t i = 0; i < extra_isolated; ++i) g.study_nodes.push_back("i" + std::to_string(i));
    g.shared_edges.push_back({0, 1, 1});
    return g;
}

}  // namespace

TEST_CASE("identical reference lists share one weighted edge", "[network]") {
    const std::vector<std::string> refs{"Holten D. Edge bundles", "Eades P. A heuristic", "Paulovich F. LSP"};
    Corpus c({study("a", "Alpha", "", {}, refs), study("b", "Beta", "", {}, refs)});
    auto g = graph_of(c);
    REQUIRE(g.shared_edges.size() == 1);
    CHECK(g.shared_edges[0] == CitationGraph::SharedEdge{0, 1, 3});
    CHECK(g.reference_nodes.size() == 3);
    CHECK(g.cite_edges.size() == 6);
    CHECK(isolated_studies(g).empty());
}

TEST_CASE("disjoint reference lists leave every study isolated", "[network]") {
    Corpus c({study("a", "Alpha", "", {}, {"one ref"}), study("b", "Beta", "", {}, {"another thing"}),
              study("c", "Gamma")});
    auto g = graph_of(c);
    CHECK(g.shared_edges.empty());
    auto layout = run_layout(g, ForceParams{});
    CHECK(layout.isolated == std::vector<std::string>{"a", "b", "c"});
    CHECK(layout.positions.size() == 5);
    CHECK(layout.kinds[3] == NodeKind::reference);
}

TEST_CASE("repeated citations collapse into one weighted edge", "[network]") {
    Corpus c({study("a", "Alpha", "", {}, {"Smith. Beta. 2001", "Smith, Beta (2001)", "zzz"}), study("b", "Beta")});
    auto g = graph_of(c);
    REQUIRE(g.cite_edges.size() == 2);
    CHECK(g.cite_edges[0] == CitationGraph::CiteEdge{0, 1, 2});
    CHECK(g.kind(g.cite_edges[1].target) == NodeKind::reference);
    CHECK(isolated_studies(g).empty());
}

TEST_CASE("shared edges equal a pairwise intersection oracle", "[network][property]") {
    Rng rng(41);
    for (std::size_t n : {2u, 10u, 37u, 80u, 200u}) {
        for (int round = 0; round < 3; ++round) {
            auto rc = random_reference_corpus(rng, n, 3 * n, 0.0);
            auto g = graph_of(rc.corpus);
            std::vector<CitationGraph::SharedEdge> expected;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b) {
                    std::size_t common = 0;
                    for (std::size_t r : rc.pool_refs[a]) common += rc.pool_refs[b].count(r);
                    if (common) expected.push_back({a, b, common});
                }
            REQUIRE(g.shared_edges == expected);
        }
    }
}

TEST_CASE("isolated studies equal a degree-zero oracle", "[network][property]") {
    Rng rng(43);
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = 1 + rng.below(30);
        auto rc = random_reference_corpus(rng, n, 4 * n + rng.below(40), 0.3);
        auto g = graph_of(rc.corpus);
        std::vector<std::size_t> degree(n, 0);
        for (auto [a, b] : rc.citations) ++degree[a], ++degree[b];
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (a != b)
                    for (std::size_t r : rc.pool_refs[a]) degree[a] += rc.pool_refs[b].count(r);
        std::vector<std::string> expected;
        for (std::size_t i = 0; i < n; ++i)
            if (degree[i] == 0) expected.push_back("s" + std::to_string(i));
        REQUIRE(isolated_studies(g) == expected);
    }
}

TEST_CASE("force params validation", "[force]") {
    ForceParams p;
    CHECK_NOTHROW(p.validate());
    p.c3 = 0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    CHECK(ForceParams{}.fingerprint() != ForceParams{2, 1, 1, 0.1, 300, 5}.fingerprint());
}

TEST_CASE("two connected nodes settle at the natural length", "[force]") {
    for (double start : {0.05, 0.4, 3.0, 8.0}) {
        auto g = pair_graph();
        std::vector<Point2> pos{{0, 0}, {start, 0}};
        ForceParams params;
        std::size_t steps = 0;
        while (std::abs(distance(pos[0], pos[1]) - params.c2) > 0.01 * params.c2 && steps < 500) {
            pos = force_step(g, pos, params);
            ++steps;
        }
        INFO("start " << start);
        CHECK(steps < 500);
    }
}

TEST_CASE("a single node never moves", "[force]") {
    CitationGraph g;
    g.study_nodes = {"only"};
    std::vector<Point2> pos{{0.3, 0.7}};
    for (int i = 0; i < 10; ++i) pos = force_step(g, pos, ForceParams{});
    CHECK(pos[0] == Point2{0.3, 0.7});
    auto layout = run_layout(g, ForceParams{});
    CHECK(layout.isolated == std::vector<std::string>{"only"});
}

TEST_CASE("mirror-symmetric layouts stay symmetric", "[force]") {
    CitationGraph g;
    g.study_nodes = {"l0", "r0", "l1", "r1"};
    g.shared_edges = {{0, 1, 2}, {0, 2, 1}, {1, 3, 1}};
    std::vector<Point2> pos{{-1, 0}, {1, 0}, {-0.5, 1.5}, {0.5, 1.5}};
    const std::size_t mirror[] = {1, 0, 3, 2};
    for (int step = 0; step < 300; ++step) {
        pos = force_step(g, pos, ForceParams{});
        for (std::size_t i = 0; i < 4; ++i) {
            REQUIRE(std::abs(pos[i].x + pos[mirror[i]].x) <= 1e-9);
            REQUIRE(std::abs(pos[i].y - pos[mirror[i]].y) <= 1e-9);
        }
    }
}

TEST_CASE("coincident points stay finite", "[force]") {
    Rng rng(2);
    for (int round = 0; round < 20; ++round) {
        auto rc = random_reference_corpus(rng, 15, 20, 0.3);
        auto g = graph_of(rc.corpus);
        std::vector<Point2> pos(g.node_count(), Point2{0.5, 0.5});
        for (int step = 0; step < 50; ++step) {
            pos = force_step(g, pos, ForceParams{});
            REQUIRE(pos.size() == g.node_count());
            for (auto p : pos) REQUIRE((std::isfinite(p.x) && std::isfinite(p.y)));
        }
    }
}

TEST_CASE("initial positions are seeded and distinct", "[force]") {
    auto a = initial_positions(200, 9);
    CHECK(a == initial_positions(200, 9));
    CHECK(a != initial_positions(200, 10));
    std::set<std::pair<double, double>> seen;
    for (auto p : a) {
        CHECK(p.x >= 0.0);
        CHECK(p.x < 1.0 + 1e-3);
        seen.emplace(p.x, p.y);
    }
    CHECK(seen.size() == 200);
}

TEST_CASE("connected pairs end closer than an isolated node", "[force][property]") {
    auto g = pair_graph(1);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        ForceParams params;
        params.seed = seed;
        auto layout = run_layout(g, params);
        const double ab = distance(layout.positions[0], layout.positions[1]);
        REQUIRE(ab < distance(layout.positions[0], layout.positions[2]));
        REQUIRE(ab < distance(layout.positions[1], layout.positions[2]));
        REQUIRE(layout.isolated == std::vector<std::string>{"i0"});
    }
}

TEST_CASE("run_layout basics", "[force]") {
    auto empty = run_layout(CitationGraph{}, ForceParams{});
    CHECK(empty.positions.empty());
    CHECK(empty.isolated.empty());

    Rng rng(12);
    auto rc = random_reference_corpus(rng, 25, 30, 0.4);
    auto g = graph_of(rc.corpus);
    ForceParams params;
    params.seed = 4;
    auto a = run_layout(g, params);
    auto b = run_layout(g, params);
    CHECK(a.positions == b.positions);
    CHECK(a.steps == b.steps);
    CHECK(a.steps <= params.iterations);
    params.weighted = false;
    auto c = run_layout(g, params);
    CHECK(c.positions != a.positions);
}

TEST_CASE("early stop once nodes barely move", "[force]") {
    auto g = pair_graph();
    ForceParams params;
    params.iterations = 5000;
    auto layout = run_layout(g, params);
    CHECK(layout.steps < 5000);
    CHECK(std::abs(distance(layout.positions[0], layout.positions[1]) - 1.0) < 1e-3);
}
