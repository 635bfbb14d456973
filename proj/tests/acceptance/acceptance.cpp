// Acceptance gate: one PASS/FAIL line per primary criterion, each checked at
// its stated tolerance and time limit. Exit status is non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/porter_reference.hpp"
#include "studymap/bundles.hpp"
#include "studymap/cli.hpp"
#include "studymap/export.hpp"
#include "studymap/network.hpp"
#include "studymap/projection.hpp"
#include "studymap/session.hpp"
#include "studymap/text.hpp"
#include "studymap/workbench.hpp"
#include "support/fixtures.hpp"

using namespace studymap;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

int failures = 0;

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void criterion(const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds >= limit_seconds) {
        out.pass = false;
        if (out.detail.empty()) out.detail = "over the time limit";
    }
    failures += !out.pass;
    std::printf("%s  %-22s %.3f s (limit %.0f s)%s%s\n", out.pass ? "PASS" : "FAIL", name.c_str(), seconds,
                limit_seconds, out.detail.empty() ? "" : "  ", out.detail.c_str());
    std::fflush(stdout);
}

const Timestamp t0 = parse_timestamp("2011-10-22T09:00:00Z");

std::vector<std::string> ids37() {
    std::vector<std::string> ids;
    for (int i = 1; i <= 37; ++i) ids.push_back("s" + std::to_string(i));
    return ids;
}

// 37 studies of which the first 20 are relevant. Decisions are correct except
// for `fn` relevant studies excluded and `fp` irrelevant studies included.
SessionMetrics score(std::size_t fn, std::size_t fp) {
    const auto ids = ids37();
    ReviewSession session(ids, ids, "acceptance", t0);
    for (std::size_t i = 0; i < 37; ++i) {
        const bool relevant = i < 20;
        bool include = relevant;
        if (relevant && i < fn) include = false;
        if (!relevant && i - 20 < fp) include = true;
        session.set_decision(ids[i], include ? Status::included : Status::excluded, "r",
                             t0 + std::chrono::minutes(i + 1));
    }
    const std::vector<std::string> relevant(ids.begin(), ids.begin() + 20);
    return compute_metrics(session, GoldStandard::from_included(ids, relevant));
}

double naive_cosine(const std::vector<double>& a, const std::vector<double>& b) {
    long double dot = 0, na = 0, nb = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        dot += static_cast<long double>(a[j]) * b[j];
        na += static_cast<long double>(a[j]) * a[j];
        nb += static_cast<long double>(b[j]) * b[j];
    }
    return (na == 0 || nb == 0) ? 0.0 : static_cast<double>(dot / std::sqrt(na * nb));
}

double lsp_residual(const DocumentMapLayout& layout) {
    double worst = 0.0;
    for (std::size_t i = 0; i < layout.positions.size(); ++i) {
        if (layout.is_control[i]) continue;
        Point2 mean{};
        for (std::size_t j : layout.neighbors[i]) mean = mean + layout.positions[j];
        mean = (1.0 / static_cast<double>(layout.neighbors[i].size())) * mean;
        worst = std::max(worst, distance(mean, layout.positions[i]));
    }
    return worst;
}

std::vector<Point2> random_path(Rng& rng, std::size_t m) {
    std::vector<Point2> p(m);
    for (auto& q : p) q = {rng.uniform() * 10 - 5, rng.uniform() * 10 - 5};
    return p;
}

// Random corpus whose studies list references from a shared pool; cites
// records explicit study-to-study citations.
struct ReferenceCorpus {
    Corpus corpus;
    std::vector<std::set<std::size_t>> refs;
    std::set<std::pair<std::size_t, std::size_t>> cites;
};

ReferenceCorpus reference_corpus(Rng& rng, std::size_t n, std::size_t pool, double cite_rate) {
    ReferenceCorpus out;
    out.refs.resize(n);
    std::vector<std::string> titles;
    for (std::size_t i = 0; i < n; ++i) {
        titles.push_back("Paper " + std::to_string(i) + " on " + test::pseudo_word(5, i % 40) + " " +
                         test::pseudo_word(6, i / 40));
    }
    std::vector<StudyRecord> studies;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> list;
        for (std::size_t r = rng.below(6); r > 0; --r) {
            const std::size_t j = rng.below(pool);
            out.refs[i].insert(j);
            list.push_back("Ref " + test::pseudo_word(15 + j / 40, j % 40) + " " +
                           test::pseudo_word(15 + j / 40, 40 + j % 2));
        }
        if (rng.uniform() < cite_rate) {
            const std::size_t j = rng.below(n);
            if (j != i) {
                out.cites.emplace(i, j);
                list.push_back("X. " + titles[j] + ". 2010");
            }
        }
        studies.push_back(test::study("s" + std::to_string(i), titles[i], "", {}, list));
    }
    out.corpus = Corpus(studies);
    return out;
}

CitationGraph graph_of(const Corpus& corpus) {
    auto resolved = resolve_citations(corpus, canonicalize_references(corpus));
    return build_citation_graph(corpus, resolved.references, resolved.links);
}

std::string run_cli_capture(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (code != 0) throw Error("cli exited with " + std::to_string(code) + ": " + err.str());
    return out.str();
}

}  // namespace

int main() {
    criterion("session-arithmetic", 1, [] {
        Outcome o;
        const std::pair<std::size_t, std::size_t> rows[] = {{25, 12}, {22, 15}, {27, 10}, {28, 9}};
        for (auto [correct, incorrect] : rows) {
            // split the errors between both kinds
            const auto fn = std::min<std::size_t>(incorrect, 10);
            const auto m = score(fn, incorrect - fn);
            o.require(m.correct == correct && m.incorrect == incorrect,
                      "row " + std::to_string(correct) + "/" + std::to_string(incorrect) + " gave " +
                          std::to_string(m.correct) + "/" + std::to_string(m.incorrect));
            o.require(m.correct + m.incorrect == 37, "correct + incorrect != 37");
        }
        return o;
    });

    criterion("fn-fp-split", 1, [] {
        Outcome o;
        const auto m = score(10, 5);
        o.require(m.false_negatives == 10, "false_negatives = " + std::to_string(m.false_negatives));
        o.require(m.false_positives == 5, "false_positives = " + std::to_string(m.false_positives));
        return o;
    });

    criterion("cosine-oracle", 5, [] {
        Outcome o;
        Rng rng(2011);
        double worst = 0;
        for (int i = 0; i < 1000; ++i) {
            const std::size_t dim = 1 + rng.below(200);
            std::vector<double> a(dim), b(dim);
            SparseVector sa{dim, {}}, sb{dim, {}};
            for (std::size_t j = 0; j < dim; ++j) {
                a[j] = rng.below(2) ? 0.0 : rng.uniform() * 100;
                b[j] = rng.below(2) ? 0.0 : rng.uniform() * 100;
                if (a[j] > 0) sa.entries.emplace_back(static_cast<std::uint32_t>(j), a[j]);
                if (b[j] > 0) sb.entries.emplace_back(static_cast<std::uint32_t>(j), b[j]);
            }
            const double expected = naive_cosine(a, b);
            for (double got : {cosine_similarity(a, b), cosine_similarity(sa, sb)}) {
                worst = std::max(worst, std::abs(got - expected));
                o.require(got >= 0.0 && got <= 1.0, "cosine outside [0, 1]");
            }
        }
        o.require(worst <= 1e-9, "max deviation " + sci(worst));
        if (o.pass) o.detail = "1000 pairs, max deviation " + sci(worst);
        return o;
    });

    criterion("stemming", 1, [] {
        Outcome o;
        PipelineConfig config;
        const auto tokens = preprocess(test::study("x", "testing tester"), config);
        o.require(tokens == std::vector<std::string>{"test", "test"}, "testing/tester do not both stem to test");
        std::size_t agree = 0, total = 0;
        for (auto [word, stem] : test::kRandomWordStems) {
            agree += porter_stem(word) == stem;
            ++total;
        }
        o.require(total == 200, "oracle list does not hold 200 words");
        o.require(agree == total, std::to_string(agree) + "/" + std::to_string(total) + " agree with the oracle");
        return o;
    });

    criterion("projection", 10, [] {
        Outcome o;
        std::string summary;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            auto planted = test::planted_topics(60, 3, seed);
            auto m = build_matrix(planted.corpus, PipelineConfig{});
            ProjectionConfig config;
            config.seed = seed;
            auto layout = project_document_map(m, config);
            auto placed = project_controls(m, layout.control_indices, seed);
            for (std::size_t c = 0; c < placed.indices.size(); ++c) {
                o.require(layout.positions[placed.indices[c]] == placed.positions[c], "control moved");
            }
            const double res = lsp_residual(layout);
            o.require(res <= 1e-6, "residual " + sci(res));
            std::size_t good = 0;
            for (std::size_t i = 0; i < 60; ++i) {
                std::size_t same = 0;
                for (auto j : nearest_in_plane(layout.positions, i, 5)) same += planted.topic[j] == planted.topic[i];
                good += same >= 3;
            }
            o.require(good >= 54, "seed " + std::to_string(seed) + ": " + std::to_string(good) + "/60 majority same-topic");
            summary += (summary.empty() ? "" : " ") + std::to_string(good);
        }
        if (o.pass) o.detail = "majority same-topic 5-NN per seed: " + summary + " of 60";
        return o;
    });

    criterion("bundling-limits", 5, [] {
        Outcome o;
        Rng rng(16);
        for (int i = 0; i < 500; ++i) {
            auto path = random_path(rng, 2 + rng.below(10));
            auto straight = bundle(path, BundleParams{0.0, 2 + rng.below(100)});
            for (auto p : straight.points) {
                o.require(distance_to_line(p, path.front(), path.back()) <= 1e-9, "beta = 0 sample off the chord");
            }
            auto tight = bundle(path, BundleParams{1.0, 50});
            for (auto p : tight.points) o.require(test::in_convex_hull(p, path, 1e-9), "beta = 1 sample outside the hull");
            if (path.size() >= 3) {
                double previous = -1;
                for (double beta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                    auto line = bundle(path, BundleParams{beta, 51});
                    const double dev = distance_to_line(line.points[25], path.front(), path.back());
                    o.require(dev >= previous - 1e-12, "midpoint deviation decreased with beta");
                    previous = dev;
                }
            }
        }
        return o;
    });

    criterion("force-layout", 10, [] {
        Outcome o;
        ForceParams params;
        for (double start : {0.05, 0.3, 2.0, 6.0}) {
            CitationGraph g;
            g.study_nodes = {"a", "b"};
            g.shared_edges.push_back({0, 1, 1});
            std::vector<Point2> pos{{0, 0}, {start, 0}};
            std::size_t steps = 0;
            while (std::abs(distance(pos[0], pos[1]) - params.c2) > 0.01 * params.c2 && steps <= 500) {
                pos = force_step(g, pos, params);
                ++steps;
            }
            o.require(steps <= 500, "two-node pair from " + std::to_string(start) + " not within 1% after 500 steps");
        }

        CitationGraph mirror;
        mirror.study_nodes = {"l0", "r0", "l1", "r1", "l2", "r2"};
        mirror.shared_edges = {{0, 1, 2}, {0, 2, 1}, {1, 3, 1}, {2, 4, 3}, {3, 5, 3}};
        std::vector<Point2> pos{{-1, 0}, {1, 0}, {-0.5, 1.5}, {0.5, 1.5}, {-2, -1}, {2, -1}};
        const std::size_t partner[] = {1, 0, 3, 2, 5, 4};
        double worst = 0;
        for (int step = 0; step < 500; ++step) {
            pos = force_step(mirror, pos, params);
            for (std::size_t i = 0; i < pos.size(); ++i) {
                worst = std::max({worst, std::abs(pos[i].x + pos[partner[i]].x), std::abs(pos[i].y - pos[partner[i]].y)});
            }
        }
        o.require(worst <= 1e-9, "mirror asymmetry " + sci(worst));

        Rng rng(18);
        for (int round = 0; round < 100; ++round) {
            const std::size_t n = 1 + rng.below(40);
            auto rc = reference_corpus(rng, n, 4 * n + rng.below(40), 0.3);
            auto g = graph_of(rc.corpus);
            std::vector<std::size_t> degree(n, 0);
            for (auto [a, b] : rc.cites) ++degree[a], ++degree[b];
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    if (a != b)
                        for (auto r : rc.refs[a]) degree[a] += rc.refs[b].count(r);
            std::vector<std::string> expected;
            for (std::size_t i = 0; i < n; ++i)
                if (degree[i] == 0) expected.push_back("s" + std::to_string(i));
            o.require(isolated_studies(g) == expected, "isolated set differs from the degree-0 oracle");
        }
        return o;
    });

    criterion("shared-references", 10, [] {
        Outcome o;
        Rng rng(19);
        for (std::size_t n : {2u, 5u, 20u, 50u, 100u, 150u, 200u}) {
            auto rc = reference_corpus(rng, n, 3 * n, 0.0);
            auto g = graph_of(rc.corpus);
            std::vector<CitationGraph::SharedEdge> expected;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b) {
                    std::size_t common = 0;
                    for (auto r : rc.refs[a]) common += rc.refs[b].count(r);
                    if (common) expected.push_back({a, b, common});
                }
            o.require(g.shared_edges == expected, "shared edges differ from the oracle at n = " + std::to_string(n));
        }
        return o;
    });

    criterion("expression-heat", 1, [] {
        Outcome o;
        Rng rng(20);
        for (int round = 0; round < 50; ++round) {
            const std::size_t n = 1 + rng.below(30);
            std::vector<StudyRecord> studies;
            std::vector<std::size_t> planted(n);
            for (std::size_t i = 0; i < n; ++i) {
                planted[i] = rng.below(5);
                std::string abstract = "filler words";
                for (std::size_t c = 0; c < planted[i]; ++c) abstract += rng.below(2) ? " Software Testing." : " software-testing and";
                abstract += " software tests";
                studies.push_back(test::study("s" + std::to_string(i), "title " + std::to_string(i), abstract));
            }
            auto heat = expression_frequency(Corpus(studies), "software testing");
            o.require(heat.counts == planted, "counts differ from the planted occurrences");
            const std::size_t top = *std::max_element(planted.begin(), planted.end());
            for (std::size_t i = 0; i < n; ++i) {
                if (planted[i] == 0) o.require(heat.shade[i] == 0.0, "zero occurrences but shade != 0");
                if (top > 0 && planted[i] == top) o.require(heat.shade[i] == 1.0, "corpus maximum but shade != 1");
                for (std::size_t j = 0; j < n; ++j) {
                    if (planted[i] < planted[j]) o.require(heat.shade[i] < heat.shade[j], "shade not monotone in counts");
                    if (planted[i] == planted[j]) o.require(heat.shade[i] == heat.shade[j], "equal counts, different shades");
                }
            }
        }
        return o;
    });

    criterion("determinism", 30, [] {
        Outcome o;
        const auto bib = test::review_bibtex(37, 2011);
        auto outputs = [&](std::uint64_t seed) {
            Workbench bench(parse_bibtex(bib).corpus, WorkbenchConfig{}.with_seed(seed));
            std::vector<std::string> out;
            out.push_back(map_json(*bench.map()).dump());
            out.push_back(clusters_json(*bench.clusters(), bench.corpus().ids()).dump());
            out.push_back(hierarchy_json(*bench.hierarchy()).dump());
            out.push_back(bundles_json(*bench.bundles()).dump());
            out.push_back(network_json(*bench.graph(), *bench.network()).dump());
            out.push_back(map_svg(*bench.map(), bench.clusters().get()));
            out.push_back(bundles_svg(*bench.bundles()));
            out.push_back(network_svg(*bench.graph(), *bench.network()));
            return out;
        };
        for (std::uint64_t seed : {0u, 7u}) o.require(outputs(seed) == outputs(seed), "library outputs differ between runs");

        const auto dir = std::filesystem::temp_directory_path() / "studymap_acceptance";
        std::filesystem::create_directories(dir);
        const auto path = (dir / "corpus.bib").string();
        std::ofstream(path, std::ios::binary) << bib;
        const std::vector<std::vector<std::string>> commands = {
            {"ingest", path, "--format", "json"},
            {"map", path, "--seed", "7"},
            {"map", path, "--seed", "7", "--format", "svg", "--color-clusters"},
            {"bundles", path, "--seed", "7"},
            {"network", path, "--seed", "7"},
            {"overlay", path, "--seed", "7", "--kind", "clusters"},
            {"overlay", path, "--kind", "knn"},
            {"overlay", path, "--kind", "expression", "--expr", "software testing"},
        };
        for (const auto& args : commands) {
            o.require(run_cli_capture(args) == run_cli_capture(args), "cli output differs: " + args[0]);
        }
        std::filesystem::remove_all(dir);
        return o;
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
