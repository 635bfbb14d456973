#include "studymap/kmeans.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "studymap/random.hpp"

namespace studymap {
namespace {

struct UnitRows {
    std::vector<const SparseVector*> rows;
    std::vector<double> inv_norm;  // 0 for zero rows

    double dot(std::size_t i, const std::vector<double>& centroid) const {
        double s = 0.0;
        for (auto [t, w] : rows[i]->entries) s += w * centroid[t];
        return s * inv_norm[i];
    }

    double dot(std::size_t i, std::size_t j) const {
        const auto& a = rows[i]->entries;
        const auto& b = rows[j]->entries;
        double s = 0.0;
        auto ia = a.begin();
        auto ib = b.begin();
        while (ia != a.end() && ib != b.end()) {
            if (ia->first < ib->first) ++ia;
            else if (ib->first < ia->first) ++ib;
            else {
                s += ia->second * ib->second;
                ++ia;
                ++ib;
            }
        }
        return s * inv_norm[i] * inv_norm[j];
    }
};

double cost(const UnitRows& x, std::size_t i, const std::vector<double>& centroid) {
    return 1.0 - std::clamp(x.dot(i, centroid), -1.0, 1.0);
}

std::vector<double> centroid_of(const UnitRows& x, const std::vector<std::size_t>& assignment, std::size_t cluster,
                                std::size_t dim) {
    std::vector<double> c(dim, 0.0);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] != cluster) continue;
        for (auto [t, w] : x.rows[i]->entries) c[t] += w * x.inv_norm[i];
    }
    double norm = 0.0;
    for (double v : c) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (double& v : c) v /= norm;
    return c;
}

std::vector<double> dense_unit(const UnitRows& x, std::size_t i, std::size_t dim) {
    std::vector<double> c(dim, 0.0);
    for (auto [t, w] : x.rows[i]->entries) c[t] = w * x.inv_norm[i];
    return c;
}

KMeansResult run_once(const UnitRows& x, std::size_t dim, std::size_t k, std::uint64_t seed,
                      const KMeansOptions& options) {
    const std::size_t n = x.rows.size();
    Rng rng(seed);

    // k-means++ seeding on distance 1 - cos
    std::vector<std::size_t> chosen{static_cast<std::size_t>(rng.below(n))};
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    while (chosen.size() < k) {
        const std::size_t last = chosen.back();
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], std::max(0.0, 1.0 - x.dot(i, last)));
            total += nearest[i] * nearest[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            double r = rng.uniform() * total;
            for (std::size_t i = 0; i < n; ++i) {
                const double w = nearest[i] * nearest[i];
                if (w <= 0.0) continue;
                pick = i;
                if (r < w) break;
                r -= w;
            }
        }
        if (pick == n) {
            // every point coincides with a chosen center
            for (std::size_t i = 0; i < n && pick == n; ++i)
                if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) pick = i;
        }
        chosen.push_back(pick);
    }

    KMeansResult result;
    result.centroids.reserve(k);
    for (std::size_t c : chosen) result.centroids.push_back(dense_unit(x, c, dim));
    result.assignment.assign(n, 0);

    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        // assignment; ties go to the lower cluster index
        std::vector<double> point_cost(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_cost = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = cost(x, i, result.centroids[c]);
                if (d < best_cost) {
                    best_cost = d;
                    best = c;
                }
            }
            result.assignment[i] = best;
            point_cost[i] = best_cost;
        }

        // refill empty clusters from the largest one with spread
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t a : result.assignment) ++sizes[a];
        for (std::size_t empty = 0; empty < k; ++empty) {
            if (sizes[empty] != 0) continue;
            std::size_t donor = k;
            for (std::size_t c = 0; c < k; ++c) {
                if (sizes[c] < 2) continue;
                bool spread = false;
                for (std::size_t i = 0; i < n && !spread; ++i) spread = result.assignment[i] == c && point_cost[i] > 0.0;
                if (!spread) continue;
                if (donor == k || sizes[c] > sizes[donor]) donor = c;
            }
            if (donor == k) {
                for (std::size_t c = 0; c < k; ++c)
                    if (sizes[c] >= 2 && (donor == k || sizes[c] > sizes[donor])) donor = c;
            }
            std::size_t far = n;
            for (std::size_t i = 0; i < n; ++i)
                if (result.assignment[i] == donor && (far == n || point_cost[i] > point_cost[far])) far = i;
            result.assignment[far] = empty;
            point_cost[far] = 0.0;
            --sizes[donor];
            ++sizes[empty];
        }

        double movement = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            auto updated = centroid_of(x, result.assignment, c, dim);
            double d2 = 0.0;
            for (std::size_t t = 0; t < dim; ++t) d2 += (updated[t] - result.centroids[c][t]) * (updated[t] - result.centroids[c][t]);
            movement = std::max(movement, std::sqrt(d2));
            result.centroids[c] = std::move(updated);
        }

        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) objective += cost(x, i, result.centroids[result.assignment[i]]);
        assert(result.objective_history.empty() || objective <= result.objective_history.back() + 1e-9);
        result.objective_history.push_back(objective);
        result.objective = objective;
        result.iterations = iter + 1;
        if (movement < options.tolerance) break;
    }
    return result;
}

}  // namespace

KMeansResult spherical_kmeans(const TermDocumentMatrix& matrix, std::span<const std::size_t> docs, std::size_t k,
                              std::uint64_t seed, const KMeansOptions& options) {
    if (k < 1 || k > docs.size())
        throw InvalidArgument("k-means: k must satisfy 1 <= k <= " + std::to_string(docs.size()) + " (got " +
                              std::to_string(k) + ")");
    UnitRows x;
    x.rows.reserve(docs.size());
    for (std::size_t d : docs) {
        x.rows.push_back(&matrix.vectors().at(d));
        const double norm = matrix.norms()[d];
        x.inv_norm.push_back(norm > 0.0 ? 1.0 / norm : 0.0);
    }

    KMeansResult best;
    const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
    for (std::size_t r = 0; r < restarts; ++r) {
        auto run = run_once(x, matrix.terms(), k, seed + 0x9e3779b97f4a7c15ULL * r, options);
        if (r == 0 || run.objective < best.objective - 1e-12) best = std::move(run);
    }
    return best;
}

}  // namespace studymap
