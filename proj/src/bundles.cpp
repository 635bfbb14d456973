#include "studymap/bundles.hpp"

#include <algorithm>
#include <sstream>

#include "studymap/hash.hpp"

namespace studymap {

void BundleParams::validate() const {
    if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidArgument("beta must lie in [0, 1]");
    if (samples_per_edge < 2) throw InvalidArgument("samples_per_edge must be at least 2");
}

std::string BundleParams::fingerprint() const {
    std::ostringstream out;
    out.precision(17);
    out << "beta:" << beta << ";samples:" << samples_per_edge;
    return to_hex(fnv1a64(out.str()));
}

std::vector<Point2> control_path(const HierarchyTree& tree, std::size_t citing, std::size_t cited) {
    const std::size_t n = tree.ids().size();
    if (citing >= n || cited >= n) throw UnknownId("study index out of range", {});
    const auto& nodes = tree.nodes();
    std::size_t a = tree.leaf_of(citing);
    std::size_t b = tree.leaf_of(cited);
    const std::size_t lca = tree.lowest_common_ancestor(a, b);

    std::vector<Point2> up{tree.study_positions()[citing]};
    for (; a != lca; a = *nodes[a].parent) up.push_back(nodes[a].centroid);
    up.push_back(nodes[lca].centroid);

    std::vector<Point2> down{tree.study_positions()[cited]};
    for (; b != lca; b = *nodes[b].parent) down.push_back(nodes[b].centroid);

    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

std::vector<Point2> control_path(const HierarchyTree& tree, std::string_view citing, std::string_view cited) {
    return control_path(tree, tree.study_index(citing), tree.study_index(cited));
}

namespace {

// de Boor evaluation of a clamped uniform B-spline of the given degree.
Point2 evaluate(std::span<const Point2> ctrl, const std::vector<double>& knots, std::size_t degree, double u) {
    const std::size_t n = ctrl.size();
    // span index s with knots[s] <= u < knots[s+1], clamped to the last span at u = 1
    std::size_t s = degree;
    while (s + 1 < n && knots[s + 1] <= u) ++s;

    std::vector<Point2> d(degree + 1);
    for (std::size_t j = 0; j <= degree; ++j) d[j] = ctrl[s - degree + j];
    for (std::size_t r = 1; r <= degree; ++r) {
        for (std::size_t j = degree; j >= r; --j) {
            const std::size_t i = s - degree + j;
            const double denom = knots[i + degree + 1 - r] - knots[i];
            const double alpha = denom > 0.0 ? (u - knots[i]) / denom : 0.0;
            d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j];
        }
    }
    return d[degree];
}

}  // namespace

BundledPolyline bundle(std::span<const Point2> path, const BundleParams& params) {
    params.validate();
    if (path.size() < 2) throw InvalidArgument("bundle: a path needs at least 2 points");
    const std::size_t m = path.size();
    const Point2 first = path.front();
    const Point2 last = path.back();

    std::vector<Point2> ctrl(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(m - 1);
        const Point2 chord = first + f * (last - first);
        ctrl[i] = params.beta * path[i] + (1.0 - params.beta) * chord;
    }

    const std::size_t degree = std::min<std::size_t>(3, m - 1);
    std::vector<double> knots;
    knots.reserve(m + degree + 1);
    for (std::size_t i = 0; i <= degree; ++i) knots.push_back(0.0);
    const std::size_t interior = m - degree - 1;
    for (std::size_t i = 1; i <= interior; ++i)
        knots.push_back(static_cast<double>(i) / static_cast<double>(interior + 1));
    for (std::size_t i = 0; i <= degree; ++i) knots.push_back(1.0);

    const std::size_t samples = params.samples_per_edge;
    BundledPolyline out;
    out.points.reserve(samples);
    out.gradient.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(samples - 1);
        if (i == 0) out.points.push_back(first);
        else if (i + 1 == samples) out.points.push_back(last);
        else out.points.push_back(evaluate(ctrl, knots, degree, u));
        out.gradient.push_back(u);
    }
    return out;
}

BundleLayout build_bundle_layout(const HierarchyTree& tree, const CitationLinks& links, const BundleParams& params) {
    params.validate();
    BundleLayout layout;
    const auto& ids = tree.ids();
    layout.nodes.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const std::size_t count = i < links.cited_counts.size() ? links.cited_counts[i] : 0;
        layout.nodes.push_back({ids[i], tree.study_positions()[i], count});
    }
    layout.edges.reserve(links.edges.size());
    for (const auto& e : links.edges) {
        auto path = control_path(tree, e.citing, e.cited);
        auto line = bundle(path, params);
        layout.edges.push_back({e.citing, e.cited, std::move(line.points), std::move(line.gradient)});
    }
    return layout;
}

}  // namespace studymap
