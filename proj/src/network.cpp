#include "studymap/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "studymap/hash.hpp"
#include "studymap/random.hpp"

namespace studymap {

const std::string& CitationGraph::node_id(std::size_t node) const {
    return node < study_nodes.size() ? study_nodes[node] : reference_nodes.at(node - study_nodes.size());
}

CitationGraph build_citation_graph(const Corpus& corpus, std::span<const CanonicalReference> refs,
                                   const CitationLinks& links) {
    CitationGraph graph;
    graph.study_nodes = corpus.ids();
    const std::size_t n = corpus.size();

    std::set<std::pair<std::size_t, std::size_t>> linked;
    for (const auto& e : links.edges) linked.emplace(corpus.require_index(e.citing), corpus.require_index(e.cited));

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> cites;
    std::vector<std::set<std::size_t>> refs_of(n);
    for (std::size_t r = 0; r < refs.size(); ++r) {
        const auto& ref = refs[r];
        std::size_t target;
        if (ref.matched_study) {
            target = corpus.require_index(*ref.matched_study);
        } else {
            target = n + graph.reference_nodes.size();
            graph.reference_nodes.push_back(ref.ref_id);
        }
        for (const auto& alias : ref.aliases) {
            const std::size_t s = corpus.require_index(alias.study_id);
            refs_of[s].insert(r);
            if (target == s) continue;
            if (target < n && !linked.contains({s, target})) continue;
            ++cites[{s, target}];
        }
    }
    for (const auto& [key, w] : cites) graph.cite_edges.push_back({key.first, key.second, w});

    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            std::size_t shared = 0;
            for (std::size_t r : refs_of[a]) shared += refs_of[b].count(r);
            if (shared > 0) graph.shared_edges.push_back({a, b, shared});
        }
    }
    return graph;
}

void ForceParams::validate() const {
    if (!(c1 > 0 && c2 > 0 && c3 > 0 && c4 > 0)) throw InvalidArgument("force constants must be positive");
    if (!(weight_cap > 0)) throw InvalidArgument("weight_cap must be positive");
}

std::string ForceParams::fingerprint() const {
    std::ostringstream out;
    out.precision(17);
    out << c1 << ';' << c2 << ';' << c3 << ';' << c4 << ';' << iterations << ';' << seed << ';' << weight_cap << ';'
        << weighted;
    return to_hex(fnv1a64(out.str()));
}

Adjacency adjacency_of(const CitationGraph& graph) {
    std::vector<std::map<std::size_t, double>> acc(graph.node_count());
    auto add = [&](std::size_t a, std::size_t b, double w) {
        acc[a][b] += w;
        acc[b][a] += w;
    };
    for (const auto& e : graph.cite_edges) add(e.study, e.target, static_cast<double>(e.weight));
    for (const auto& e : graph.shared_edges) add(e.a, e.b, static_cast<double>(e.weight));
    Adjacency out;
    out.neighbors.resize(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out.neighbors[i].assign(acc[i].begin(), acc[i].end());
    return out;
}

namespace {

constexpr double kMinDistance = 1e-9;

// Unit vector from i toward j for coincident points: fixed per unordered pair
// and antisymmetric, so pair forces still cancel.
Point2 fallback_direction(std::size_t i, std::size_t j) {
    const std::size_t lo = std::min(i, j), hi = std::max(i, j);
    const double angle = 2.399963229728653 * static_cast<double>(lo * 7919 + hi);
    const Point2 u{std::cos(angle), std::sin(angle)};
    return i < j ? u : -1.0 * u;
}

}  // namespace

std::vector<Point2> force_step(const Adjacency& adjacency, std::span<const Point2> positions,
                               const ForceParams& params) {
    params.validate();
    const std::size_t n = positions.size();
    if (adjacency.neighbors.size() != n) throw InvalidArgument("force_step: position count differs from node count");

    std::vector<Point2> force(n);
    std::vector<double> weight(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto [j, w] : adjacency.neighbors[i]) weight[j] = w;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const Point2 delta = positions[j] - positions[i];
            const double raw = std::hypot(delta.x, delta.y);
            const Point2 dir = raw > 0.0 ? (1.0 / raw) * delta : fallback_direction(i, j);
            const double d = std::max(raw, kMinDistance);
            double magnitude;  // positive pulls i toward j
            if (weight[j] > 0.0) {
                const double w = params.weighted ? std::min(weight[j], params.weight_cap) : 1.0;
                magnitude = params.c1 * std::log(d / params.c2) * w;
            } else {
                magnitude = -params.c3 / std::sqrt(d);
            }
            force[i] = force[i] + magnitude * dir;
        }
        for (auto [j, w] : adjacency.neighbors[i]) weight[j] = 0.0;
    }

    std::vector<Point2> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = positions[i] + params.c4 * force[i];
    return next;
}

std::vector<Point2> force_step(const CitationGraph& graph, std::span<const Point2> positions,
                               const ForceParams& params) {
    return force_step(adjacency_of(graph), positions, params);
}

std::vector<Point2> initial_positions(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Point2> out(count);
    for (auto& p : out) {
        p.x = rng.uniform();
        p.y = rng.uniform();
    }
    std::set<std::pair<double, double>> seen;
    for (auto& p : out) {
        while (!seen.emplace(p.x, p.y).second) {
            p.x += 1e-6;
            p.y += 1e-6;
        }
    }
    return out;
}

std::vector<std::string> isolated_studies(const CitationGraph& graph) {
    const std::size_t n = graph.study_nodes.size();
    std::vector<bool> linked(n, false);
    for (const auto& e : graph.shared_edges) linked[e.a] = linked[e.b] = true;
    for (const auto& e : graph.cite_edges)
        if (e.target < n) linked[e.study] = linked[e.target] = true;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i)
        if (!linked[i]) out.push_back(graph.study_nodes[i]);
    return out;
}

NetworkLayout run_layout(const CitationGraph& graph, const ForceParams& params) {
    params.validate();
    NetworkLayout layout;
    const std::size_t n = graph.node_count();
    for (std::size_t i = 0; i < n; ++i) {
        layout.ids.push_back(graph.node_id(i));
        layout.kinds.push_back(graph.kind(i));
    }
    layout.positions = initial_positions(n, params.seed);
    const Adjacency adjacency = adjacency_of(graph);
    for (std::size_t step = 0; step < params.iterations && n > 0; ++step) {
        auto next = force_step(adjacency, layout.positions, params);
        double moved = 0.0;
        for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, distance(next[i], layout.positions[i]));
        layout.positions = std::move(next);
        layout.steps = step + 1;
        if (moved < 1e-4) break;
    }
    layout.isolated = isolated_studies(graph);
    return layout;
}

}  // namespace studymap
