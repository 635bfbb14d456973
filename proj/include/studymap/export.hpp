#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "studymap/bundles.hpp"
#include "studymap/clustering.hpp"
#include "studymap/network.hpp"
#include "studymap/projection.hpp"
#include "studymap/session.hpp"
#include "studymap/text.hpp"

namespace studymap {

using Json = nlohmann::ordered_json;

/// Maps a point set into [0,1]² with one uniform scale. The longer axis spans
/// the full unit interval and the shorter one is centred. A set with zero
/// extent collapses onto (0.5, 0.5).
struct UnitFrame {
    Point2 center{0.5, 0.5};
    double inverse_extent = 0.0;

    static UnitFrame fit(std::span<const Point2> points);
    Point2 apply(Point2 p) const;
};

/// Ten categorical colors for clusters, cycled when k > 10.
std::string_view palette_color(std::size_t index);
/// Green for included, red for excluded, grey for undecided.
std::string_view status_color(Status status);

// --- layouts ----------------------------------------------------------------

/// [{id, x, y, is_control}] in corpus order, normalized to the unit square.
Json map_json(const DocumentMapLayout& layout);
/// {nodes: [{id, x, y, cited_count}], edges: [{citing, cited, polyline: [[x, y], ...]}]},
/// normalized with the frame of the node positions.
Json bundles_json(const BundleLayout& layout);
/// {nodes: [{id, kind, x, y}], edges: [{a, b, kind, weight}], isolated: [ids]}.
/// Cite edges come first (citing study as `a`), then shared-reference edges.
Json network_json(const CitationGraph& graph, const NetworkLayout& layout);

// --- debugging exports --------------------------------------------------------

/// {vocabulary: [terms], documents: [{id, entries: [[term index, weight], ...]}]}
Json matrix_json(const TermDocumentMatrix& matrix);
/// {k, assignment: {study id: cluster}, labels: {cluster: label}, colors: {cluster: color}}
Json clusters_json(const ClusterModel& model, std::span<const std::string> ids);
/// Nested {node, depth, centroid: [x, y], size, children | studies}; map coordinates.
Json hierarchy_json(const HierarchyTree& tree);

// --- overlays -----------------------------------------------------------------

/// {type: "clusters", points: [{id, cluster, color}], topics: [{cluster, label, color, x, y}]}.
/// Topic boxes sit at the mean map position of their members (unit-square coordinates).
Json cluster_overlay(const ClusterModel& model, const DocumentMapLayout& map);
/// {type: "expression", expression, max_count, points: [{id, count, shade}]}
Json expression_overlay(const ExpressionHeat& heat, std::span<const std::string> ids);
/// {type: "knn", k, edges: [{source, target, similarity}]}; k nearest per study.
Json knn_overlay(const TermDocumentMatrix& matrix, std::size_t k);
/// {type: "status", points: [{id, status, color}]}
Json status_overlay(const ReviewSession& session);

/// Renders diagnostics as [{entry_id, offset, message}].
Json diagnostics_json(const Diagnostics& diagnostics);

// --- SVG ----------------------------------------------------------------------

struct SvgStyle {
    double size = 800.0;
    double margin = 24.0;
};

/// Points colored by cluster when a model is given, with topic labels.
std::string map_svg(const DocumentMapLayout& layout, const ClusterModel* clusters = nullptr, const SvgStyle& style = {});
/// One light-to-dark blue linear gradient per edge, citing end light.
std::string bundles_svg(const BundleLayout& layout, const SvgStyle& style = {});
/// Shared edges dark, cite edges light, reference nodes small and grey,
/// isolated studies outlined.
std::string network_svg(const CitationGraph& graph, const NetworkLayout& layout, const SvgStyle& style = {});

}  // namespace studymap
