#include "studymap/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "studymap/kmeans.hpp"

namespace studymap {

std::size_t default_cluster_count(std::size_t n) {
    const auto k = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n) / 2.0)));
    return std::max<std::size_t>(1, k);
}

std::string ClusterModel::label(std::size_t cluster) const {
    if (cluster >= topics.size() || topics[cluster].empty()) return "(no topic)";
    std::string out;
    for (const auto& t : topics[cluster]) out += (out.empty() ? "" : ", ") + t;
    return out;
}

std::vector<std::size_t> ClusterModel::members(std::size_t cluster) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] == cluster) out.push_back(i);
    return out;
}

ClusterModel cluster(const TermDocumentMatrix& matrix, std::size_t k, std::uint64_t seed) {
    const std::size_t n = matrix.documents();
    if (k < 1 || k > n)
        throw InvalidArgument("cluster: k must satisfy 1 <= k <= N (N = " + std::to_string(n) + ", got " +
                              std::to_string(k) + ")");
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    auto fit = spherical_kmeans(matrix, all, k, seed);

    // number clusters by their first member so labels are stable
    std::vector<std::size_t> relabel(k, k);
    std::size_t next = 0;
    for (std::size_t a : fit.assignment)
        if (relabel[a] == k) relabel[a] = next++;

    ClusterModel model;
    model.k = k;
    model.assignment.reserve(n);
    for (std::size_t a : fit.assignment) model.assignment.push_back(relabel[a]);
    model.topics.assign(k, {});
    for (std::size_t c = 0; c < k; ++c) model.palette_index.push_back(c % kPaletteSize);
    model.objective_history = std::move(fit.objective_history);
    return model;
}

namespace {

// mean weight of every term over the given cluster's members
std::vector<std::vector<double>> inside_means(const ClusterModel& model, const TermDocumentMatrix& matrix) {
    std::vector<std::vector<double>> sums(model.k, std::vector<double>(matrix.terms(), 0.0));
    std::vector<std::size_t> sizes(model.k, 0);
    for (std::size_t d = 0; d < matrix.documents(); ++d) {
        const std::size_t c = model.assignment.at(d);
        ++sizes[c];
        for (auto [t, w] : matrix.vectors()[d].entries) sums[c][t] += w;
    }
    for (std::size_t c = 0; c < model.k; ++c)
        if (sizes[c] > 0)
            for (double& v : sums[c]) v /= static_cast<double>(sizes[c]);
    return sums;
}

}  // namespace

std::vector<double> topic_scores(const ClusterModel& model, const TermDocumentMatrix& matrix, std::size_t cluster) {
    if (model.assignment.size() != matrix.documents()) throw InvalidArgument("cluster model does not match matrix");
    std::vector<double> inside(matrix.terms(), 0.0), outside(matrix.terms(), 0.0);
    std::size_t n_in = 0, n_out = 0;
    for (std::size_t d = 0; d < matrix.documents(); ++d) {
        const bool in = model.assignment[d] == cluster;
        (in ? n_in : n_out) += 1;
        auto& target = in ? inside : outside;
        for (auto [t, w] : matrix.vectors()[d].entries) target[t] += w;
    }
    std::vector<double> score(matrix.terms());
    for (std::size_t t = 0; t < matrix.terms(); ++t) {
        const double mi = n_in ? inside[t] / static_cast<double>(n_in) : 0.0;
        const double mo = n_out ? outside[t] / static_cast<double>(n_out) : 0.0;
        score[t] = mi - mo;
    }
    return score;
}

ClusterModel extract_topics(ClusterModel model, const TermDocumentMatrix& matrix, std::size_t topic_terms) {
    if (model.assignment.size() != matrix.documents()) throw InvalidArgument("cluster model does not match matrix");
    const auto means = inside_means(model, matrix);

    std::vector<std::size_t> owner(matrix.terms(), model.k);
    for (std::size_t t = 0; t < matrix.terms(); ++t) {
        double best = 0.0;
        for (std::size_t c = 0; c < model.k; ++c) {
            if (means[c][t] > best) {
                best = means[c][t];
                owner[t] = c;
            }
        }
    }

    model.topics.assign(model.k, {});
    for (std::size_t c = 0; c < model.k; ++c) {
        const auto score = topic_scores(model, matrix, c);
        std::vector<std::size_t> eligible;
        for (std::size_t t = 0; t < matrix.terms(); ++t)
            if (owner[t] == c) eligible.push_back(t);
        std::stable_sort(eligible.begin(), eligible.end(),
                         [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
        for (std::size_t i = 0; i < std::min(topic_terms, eligible.size()); ++i)
            model.topics[c].push_back(matrix.vocabulary()[eligible[i]]);
    }
    return model;
}

// ---------------------------------------------------------------------------
// hierarchy

HierarchyTree::HierarchyTree(std::vector<std::string> ids, std::vector<Point2> study_positions,
                             std::vector<HierarchyNode> nodes)
    : ids_(std::move(ids)), positions_(std::move(study_positions)), nodes_(std::move(nodes)) {
    if (ids_.size() != positions_.size()) throw InvalidArgument("one position per study is required");
    leaf_of_.assign(ids_.size(), nodes_.size());
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        if (!nodes_[v].is_leaf()) continue;
        for (std::size_t s : nodes_[v].members) {
            if (s >= ids_.size() || leaf_of_[s] != nodes_.size())
                throw InvalidArgument("every study must sit in exactly one leaf");
            leaf_of_[s] = v;
        }
    }
    if (std::find(leaf_of_.begin(), leaf_of_.end(), nodes_.size()) != leaf_of_.end())
        throw InvalidArgument("a study is missing from the hierarchy leaves");
}

std::size_t HierarchyTree::study_index(std::string_view id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) throw UnknownId("unknown study id '" + std::string(id) + "'", {std::string(id)});
    return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t HierarchyTree::levels() const {
    std::size_t deepest = 0;
    for (const auto& n : nodes_) deepest = std::max(deepest, n.depth);
    return nodes_.empty() ? 0 : deepest + 1;
}

std::size_t HierarchyTree::lowest_common_ancestor(std::size_t a, std::size_t b) const {
    while (nodes_[a].depth > nodes_[b].depth) a = *nodes_[a].parent;
    while (nodes_[b].depth > nodes_[a].depth) b = *nodes_[b].parent;
    while (a != b) {
        a = *nodes_[a].parent;
        b = *nodes_[b].parent;
    }
    return a;
}

std::size_t max_hierarchy_levels(std::size_t n, std::size_t leaf_cap) {
    std::size_t levels = 1;
    std::size_t capacity = leaf_cap;
    while (capacity < n) {
        capacity *= 2;
        ++levels;
    }
    return levels;
}

namespace {

class Bisector {
public:
    Bisector(const TermDocumentMatrix& matrix, std::uint64_t seed) : matrix_(matrix), seed_(seed) {}

    // Splits `members` into two non-empty sides of at most `capacity` each.
    std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split(const std::vector<std::size_t>& members,
                                                                        std::size_t capacity, std::size_t node) {
        const std::size_t n = members.size();
        const auto fit = spherical_kmeans(matrix_, members, 2, seed_ + 1000003ULL * node);
        std::vector<int> side(n);
        for (std::size_t i = 0; i < n; ++i) side[i] = static_cast<int>(fit.assignment[i]);

        std::size_t count[2] = {0, 0};
        for (int s : side) ++count[s];
        int big = count[0] >= count[1] ? 0 : 1;
        if (count[big] > capacity || count[1 - big] == 0) rebalance(members, side, count, big, capacity);

        std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
        // the side holding the first member comes first
        const int first = side[0];
        for (std::size_t i = 0; i < n; ++i) (side[i] == first ? out.first : out.second).push_back(members[i]);
        return out;
    }

private:
    // Moves members from the big side, least attached first, recomputing the
    // side centroids after every move so related members follow one another.
    void rebalance(const std::vector<std::size_t>& members, std::vector<int>& side, std::size_t count[2], int big,
                   std::size_t capacity) {
        const std::size_t n = members.size();
        std::vector<std::vector<double>> gram(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double g = i == j ? (matrix_.norms()[members[i]] > 0.0 ? 1.0 : 0.0)
                                        : matrix_.similarity(members[i], members[j]);
                gram[i][j] = gram[j][i] = g;
            }
        // attach[s][i] = sum of gram over side s; sq[s] = |sum of side s|²
        std::vector<double> attach[2] = {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
        double sq[2] = {0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) attach[side[j]][i] += gram[i][j];
        for (std::size_t i = 0; i < n; ++i) sq[side[i]] += attach[side[i]][i];

        const int small = 1 - big;
        while (count[big] > capacity || count[small] == 0) {
            std::size_t pick = n;
            double best = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (side[i] != big) continue;
                const double to_big = sq[big] > 0.0 ? attach[big][i] / std::sqrt(sq[big]) : 0.0;
                const double to_small = sq[small] > 0.0 ? attach[small][i] / std::sqrt(sq[small]) : 0.0;
                const double margin = to_big - to_small;
                if (pick == n || margin < best) {
                    best = margin;
                    pick = i;
                }
            }
            // |S - x|² = |S|² - 2 x·S + x·x ; |T + x|² = |T|² + 2 x·T + x·x
            sq[big] += -2.0 * attach[big][pick] + gram[pick][pick];
            sq[small] += 2.0 * attach[small][pick] + gram[pick][pick];
            sq[big] = std::max(0.0, sq[big]);
            for (std::size_t j = 0; j < n; ++j) {
                attach[big][j] -= gram[j][pick];
                attach[small][j] += gram[j][pick];
            }
            side[pick] = small;
            --count[big];
            ++count[small];
        }
    }

    const TermDocumentMatrix& matrix_;
    std::uint64_t seed_;
};

}  // namespace

HierarchyTree build_hierarchy(const TermDocumentMatrix& matrix, const DocumentMapLayout& map, std::size_t leaf_cap,
                              std::uint64_t seed) {
    if (leaf_cap < 1) throw InvalidArgument("leaf_cap must be at least 1");
    const std::size_t n = matrix.documents();
    if (map.positions.size() != n) throw InvalidArgument("document map does not match matrix");
    const std::size_t levels = max_hierarchy_levels(n, leaf_cap);

    std::vector<HierarchyNode> nodes;
    HierarchyNode root;
    root.members.resize(n);
    std::iota(root.members.begin(), root.members.end(), 0);
    nodes.push_back(std::move(root));

    Bisector bisector(matrix, seed);
    // breadth-first so node indices grow with depth
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (nodes[v].members.size() <= leaf_cap) continue;
        const std::size_t child_capacity = leaf_cap << (levels - 2 - nodes[v].depth);
        auto [left, right] = bisector.split(nodes[v].members, child_capacity, v);
        for (auto* part : {&left, &right}) {
            HierarchyNode child;
            child.parent = v;
            child.depth = nodes[v].depth + 1;
            child.members = std::move(*part);
            nodes[v].children.push_back(nodes.size());
            nodes.push_back(std::move(child));
        }
    }

    for (auto& node : nodes) {
        Point2 sum;
        for (std::size_t s : node.members) sum = sum + map.positions[s];
        if (!node.members.empty()) node.centroid = (1.0 / static_cast<double>(node.members.size())) * sum;
    }
    return HierarchyTree(matrix.study_ids(), map.positions, std::move(nodes));
}

}  // namespace studymap
