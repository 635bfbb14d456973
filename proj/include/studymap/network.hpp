#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "studymap/corpus.hpp"
#include "studymap/geometry.hpp"

namespace studymap {

enum class NodeKind { study, reference };

/// Studies occupy node indices [0, N); unmatched canonical references follow.
struct CitationGraph {
    struct CiteEdge {
        std::size_t study;   // citing study (node index)
        std::size_t target;  // cited node: a study or a reference node
        std::size_t weight;  // reference-list occurrences collapsed into this edge

        bool operator==(const CiteEdge&) const = default;
    };
    struct SharedEdge {
        std::size_t a;  // a < b, both studies
        std::size_t b;
        std::size_t weight;  // |refs(a) ∩ refs(b)| over canonical references

        bool operator==(const SharedEdge&) const = default;
    };

    std::vector<std::string> study_nodes;
    std::vector<std::string> reference_nodes;  // canonical ref ids
    std::vector<CiteEdge> cite_edges;          // sorted by (study, target)
    std::vector<SharedEdge> shared_edges;      // sorted by (a, b)

    std::size_t node_count() const { return study_nodes.size() + reference_nodes.size(); }
    NodeKind kind(std::size_t node) const { return node < study_nodes.size() ? NodeKind::study : NodeKind::reference; }
    const std::string& node_id(std::size_t node) const;
};

/// `refs` must carry matched_study as produced by resolve_citations.
CitationGraph build_citation_graph(const Corpus& corpus, std::span<const CanonicalReference> refs,
                                   const CitationLinks& links);

struct ForceParams {
    double c1 = 2.0;  // spring scale
    double c2 = 1.0;  // natural spring length
    double c3 = 1.0;  // repulsion scale
    double c4 = 0.1;  // step scale
    std::size_t iterations = 300;
    std::uint64_t seed = 0;
    double weight_cap = 4.0;
    bool weighted = true;  // false: every adjacent pair has weight 1

    void validate() const;
    std::string fingerprint() const;
};

/// Symmetric pair weights: cite edge weights plus shared-reference weights.
struct Adjacency {
    std::vector<std::vector<std::pair<std::size_t, double>>> neighbors;  // sorted by node
};
Adjacency adjacency_of(const CitationGraph& graph);

/// One simultaneous Eades update. Adjacent pairs pull (or push) with
/// c1 * log(d / c2) * min(weight, cap); other pairs repel with c3 / sqrt(d);
/// each node moves c4 times its net force. d is clamped below at 1e-9.
std::vector<Point2> force_step(const Adjacency& adjacency, std::span<const Point2> positions,
                               const ForceParams& params);
std::vector<Point2> force_step(const CitationGraph& graph, std::span<const Point2> positions,
                               const ForceParams& params);

/// Seeded uniform positions in the unit square; exact duplicates are nudged by 1e-6.
std::vector<Point2> initial_positions(std::size_t count, std::uint64_t seed);

struct NetworkLayout {
    std::vector<std::string> ids;
    std::vector<NodeKind> kinds;
    std::vector<Point2> positions;
    std::vector<std::string> isolated;  // studies with no shared and no study-to-study cite edges
    std::size_t steps = 0;
};

/// Studies without any shared-reference edge or study-to-study citation.
std::vector<std::string> isolated_studies(const CitationGraph& graph);

/// Iterates force_step up to params.iterations times, stopping early once no
/// node moves more than 1e-4.
NetworkLayout run_layout(const CitationGraph& graph, const ForceParams& params);

}  // namespace studymap
