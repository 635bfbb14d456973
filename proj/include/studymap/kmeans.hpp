#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "studymap/text.hpp"

namespace studymap {

struct KMeansOptions {
    std::size_t max_iterations = 100;
    double tolerance = 1e-6;  // stop once no centroid moves further than this
    std::size_t restarts = 4;  // best objective wins
};

struct KMeansResult {
    std::vector<std::size_t> assignment;        // cluster per input document
    std::vector<std::vector<double>> centroids;  // unit length, or zero for all-zero groups
    std::vector<double> objective_history;      // sum of (1 - cos) after every iteration
    double objective = 0.0;
    std::size_t iterations = 0;
};

/// Spherical k-means over the rows `docs` of the matrix, distance 1 - cosine,
/// k-means++ seeding. Empty clusters are refilled from the largest cluster's
/// farthest member. Throws InvalidArgument unless 1 <= k <= docs.size().
KMeansResult spherical_kmeans(const TermDocumentMatrix& matrix, std::span<const std::size_t> docs, std::size_t k,
                              std::uint64_t seed, const KMeansOptions& options = {});

}  // namespace studymap
