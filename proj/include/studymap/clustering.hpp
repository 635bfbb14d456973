#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "studymap/geometry.hpp"
#include "studymap/projection.hpp"
#include "studymap/text.hpp"

namespace studymap {

/// round(sqrt(N / 2)), at least 1.
std::size_t default_cluster_count(std::size_t n);

inline constexpr std::size_t kPaletteSize = 10;

struct ClusterModel {
    std::size_t k = 0;
    std::vector<std::size_t> assignment;        // per study, in [0, k)
    std::vector<std::vector<std::string>> topics;  // per cluster, filled by extract_topics
    std::vector<std::size_t> palette_index;     // per cluster
    std::vector<double> objective_history;

    /// Topic terms joined by ", ", or "(no topic)".
    std::string label(std::size_t cluster) const;
    std::vector<std::size_t> members(std::size_t cluster) const;
    bool operator==(const ClusterModel&) const = default;
};

/// Spherical k-means on the term vectors. Throws InvalidArgument unless 1 <= k <= N.
ClusterModel cluster(const TermDocumentMatrix& matrix, std::size_t k, std::uint64_t seed);

/// Per-term contrast score for one cluster: mean weight inside minus mean
/// weight outside (outside mean is 0 when the cluster holds every study).
std::vector<double> topic_scores(const ClusterModel& model, const TermDocumentMatrix& matrix, std::size_t cluster);

/// Labels each cluster with its top `topic_terms` terms by contrast. A term is
/// only eligible for the cluster where its inside mean weight is highest
/// (lower cluster index on ties), so no term labels two clusters.
ClusterModel extract_topics(ClusterModel model, const TermDocumentMatrix& matrix, std::size_t topic_terms = 2);

struct HierarchyNode {
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;  // node indices
    std::vector<std::size_t> members;   // study indices, ascending
    Point2 centroid;                    // mean map position of the members
    std::size_t depth = 0;              // root = 0

    bool is_leaf() const { return children.empty(); }
    bool operator==(const HierarchyNode&) const = default;
};

/// Content hierarchy over the corpus. Studies hang below leaf nodes, so a
/// study sits one level deeper than its leaf.
class HierarchyTree {
public:
    HierarchyTree() = default;
    HierarchyTree(std::vector<std::string> ids, std::vector<Point2> study_positions, std::vector<HierarchyNode> nodes);

    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<HierarchyNode>& nodes() const noexcept { return nodes_; }
    const std::vector<Point2>& study_positions() const noexcept { return positions_; }
    std::size_t root() const noexcept { return 0; }
    std::size_t leaf_of(std::size_t study) const { return leaf_of_.at(study); }
    std::size_t study_index(std::string_view id) const;
    std::size_t study_depth(std::size_t study) const { return nodes_[leaf_of(study)].depth + 1; }
    /// Number of node levels (root alone = 1).
    std::size_t levels() const;
    std::size_t lowest_common_ancestor(std::size_t node_a, std::size_t node_b) const;

    bool operator==(const HierarchyTree&) const = default;

private:
    std::vector<std::string> ids_;
    std::vector<Point2> positions_;
    std::vector<HierarchyNode> nodes_;
    std::vector<std::size_t> leaf_of_;
};

/// Smallest L with leaf_cap * 2^(L-1) >= N; the tree never has more levels.
std::size_t max_hierarchy_levels(std::size_t n, std::size_t leaf_cap);

/// Recursive seeded 2-means on the term vectors until every group holds at
/// most leaf_cap studies. Splits that would overflow the level budget are
/// rebalanced by moving the members closest to the other side one at a time.
HierarchyTree build_hierarchy(const TermDocumentMatrix& matrix, const DocumentMapLayout& map,
                              std::size_t leaf_cap = 8, std::uint64_t seed = 0);

}  // namespace studymap
