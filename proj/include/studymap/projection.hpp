#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "studymap/error.hpp"
#include "studymap/geometry.hpp"
#include "studymap/text.hpp"

namespace studymap {

struct ProjectionConfig {
    std::optional<std::size_t> control_count;  // default max(10, round(sqrt(N))), capped at N
    std::optional<std::size_t> neighborhood_k;  // default 10, capped at N - 1
    std::uint64_t seed = 0;

    /// Throw InvalidArgument when an explicit value violates 3 <= c <= N or 1 <= k < N.
    std::size_t resolved_control_count(std::size_t n) const;
    std::size_t resolved_neighborhood_k(std::size_t n) const;
    std::string fingerprint() const;
};

struct ControlSelection {
    std::vector<std::size_t> indices;  // ascending
    std::vector<std::string> ids;
    Diagnostics warnings;
};

/// Clusters the documents into control_count groups and returns each group's
/// medoid (the member with the highest mean similarity to its group).
ControlSelection select_control_points(const TermDocumentMatrix& matrix, const ProjectionConfig& config);

struct PlacedControls {
    std::vector<std::size_t> indices;
    std::vector<Point2> positions;
    Diagnostics warnings;
};

struct MdsResult {
    std::vector<Point2> positions;
    Diagnostics warnings;
};

/// Classical MDS of a symmetric distance matrix: double-centred squared
/// distances, top two eigenpairs, coordinates = eigenvector * sqrt(eigenvalue).
/// Each axis is oriented so that its first non-negligible coordinate is
/// positive; an axis whose eigenvalue is not positive collapses to 0. When no
/// eigenvalue is positive the points go on a seeded unit circle.
MdsResult classical_mds(const std::vector<std::vector<double>>& distances, std::uint64_t seed = 0);

/// classical_mds on d(a, b) = 1 - cos(a, b). Throws InvalidArgument below 3 controls.
PlacedControls project_controls(const TermDocumentMatrix& matrix, std::span<const std::size_t> controls,
                                std::uint64_t seed = 0);

struct DocumentMapLayout {
    std::vector<std::string> ids;
    std::vector<Point2> positions;
    std::vector<std::size_t> control_indices;
    std::vector<std::string> control_ids;
    std::vector<bool> is_control;
    /// Neighbor lists used by the linear system (term-space kNN, plus any
    /// links added to reach a control).
    std::vector<std::vector<std::size_t>> neighbors;
    double quality = 0.0;  // mean |2D kNN ∩ term kNN| / k
    Diagnostics warnings;
};

/// Places every non-control study at the mean of its term-space neighbors with
/// the controls held fixed, solving the reduced linear system exactly.
DocumentMapLayout lsp_project(const TermDocumentMatrix& matrix, const PlacedControls& controls,
                              const ProjectionConfig& config);

/// select_control_points + project_controls + lsp_project. Handles corpora
/// with fewer than three studies without a linear system.
DocumentMapLayout project_document_map(const TermDocumentMatrix& matrix, const ProjectionConfig& config);

/// Indices of the k nearest points by Euclidean distance, ties by index.
std::vector<std::size_t> nearest_in_plane(std::span<const Point2> points, std::size_t i, std::size_t k);

}  // namespace studymap
