#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "studymap/clustering.hpp"
#include "studymap/corpus.hpp"
#include "studymap/geometry.hpp"

namespace studymap {

struct BundleParams {
    double beta = 0.85;                 // bundling strength, 0 = straight chords
    std::size_t samples_per_edge = 50;  // >= 2

    void validate() const;
    std::string fingerprint() const;
};

/// Presentation colors for the citing (t = 0) and cited (t = 1) ends.
inline constexpr const char* kCitingColor = "#9ecae1";
inline constexpr const char* kCitedColor = "#08306b";

struct BundledPolyline {
    std::vector<Point2> points;
    std::vector<double> gradient;  // i / (samples - 1)
};

struct BundledEdge {
    std::string citing;
    std::string cited;
    std::vector<Point2> polyline;
    std::vector<double> gradient;
};

/// Positions along the tree path citing study -> its leaf -> ... -> lowest
/// common ancestor -> ... -> cited study's leaf -> cited study.
std::vector<Point2> control_path(const HierarchyTree& tree, std::size_t citing, std::size_t cited);
std::vector<Point2> control_path(const HierarchyTree& tree, std::string_view citing, std::string_view cited);

/// Pulls the control polygon toward its end-to-end chord by (1 - beta), then
/// samples a clamped uniform B-spline (cubic, or lower degree for short
/// polygons) at samples_per_edge evenly spaced parameters.
BundledPolyline bundle(std::span<const Point2> path, const BundleParams& params);

struct BundleNode {
    std::string id;
    Point2 position;
    std::size_t cited_count = 0;
};

struct BundleLayout {
    std::vector<BundleNode> nodes;
    std::vector<BundledEdge> edges;
};

BundleLayout build_bundle_layout(const HierarchyTree& tree, const CitationLinks& links, const BundleParams& params);

}  // namespace studymap
