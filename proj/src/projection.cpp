#include "studymap/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "studymap/hash.hpp"
#include "studymap/kmeans.hpp"
#include "studymap/random.hpp"

namespace studymap {

std::size_t ProjectionConfig::resolved_control_count(std::size_t n) const {
    if (control_count) {
        if (*control_count < 3 || *control_count > n)
            throw InvalidArgument("control_count must satisfy 3 <= c <= N (N = " + std::to_string(n) + ", got " +
                                  std::to_string(*control_count) + ")");
        return *control_count;
    }
    const auto by_root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    return std::min(n, std::max<std::size_t>(10, by_root));
}

std::size_t ProjectionConfig::resolved_neighborhood_k(std::size_t n) const {
    if (neighborhood_k) {
        if (*neighborhood_k < 1 || *neighborhood_k >= n)
            throw InvalidArgument("neighborhood_k must satisfy 1 <= k < N (N = " + std::to_string(n) + ", got " +
                                  std::to_string(*neighborhood_k) + ")");
        return *neighborhood_k;
    }
    return n > 1 ? std::min<std::size_t>(10, n - 1) : 0;
}

std::string ProjectionConfig::fingerprint() const {
    std::ostringstream out;
    out << "c:" << (control_count ? std::to_string(*control_count) : "auto")
        << ";k:" << (neighborhood_k ? std::to_string(*neighborhood_k) : "auto") << ";seed:" << seed;
    return to_hex(fnv1a64(out.str()));
}

namespace {

std::vector<std::pair<std::uint32_t, double>> unit_entries(const TermDocumentMatrix& m, std::size_t d) {
    auto entries = m.vectors()[d].entries;
    const double norm = m.norms()[d];
    if (norm > 0.0)
        for (auto& e : entries) e.second /= norm;
    return entries;
}

std::size_t medoid(const TermDocumentMatrix& matrix, std::span<const std::size_t> members) {
    std::size_t best = members.front();
    double best_score = -1.0;
    for (std::size_t a : members) {
        double score = 0.0;
        for (std::size_t b : members) score += matrix.similarity(a, b);
        score /= static_cast<double>(members.size());
        if (score > best_score) {
            best_score = score;
            best = a;
        }
    }
    return best;
}

std::vector<std::vector<std::size_t>> term_neighbors(const TermDocumentMatrix& matrix, std::size_t k) {
    std::vector<std::vector<std::size_t>> out(matrix.documents());
    for (std::size_t i = 0; i < matrix.documents(); ++i)
        for (const auto& nb : knn(matrix, i, k)) out[i].push_back(nb.index);
    return out;
}

Point2 circle_point(std::size_t i, std::size_t count, double phase) {
    const double angle = phase + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
    return {std::cos(angle), std::sin(angle)};
}

}  // namespace

ControlSelection select_control_points(const TermDocumentMatrix& matrix, const ProjectionConfig& config) {
    const std::size_t n = matrix.documents();
    const std::size_t c = config.resolved_control_count(n);
    ControlSelection out;

    std::set<std::vector<std::pair<std::uint32_t, double>>> distinct;
    for (std::size_t d = 0; d < n && distinct.size() < c; ++d) distinct.insert(unit_entries(matrix, d));

    if (c == n) {
        for (std::size_t d = 0; d < n; ++d) out.indices.push_back(d);
    } else if (distinct.size() < c) {
        out.warnings.push_back({"", 0,
                                "fewer than " + std::to_string(c) +
                                    " distinct document vectors; using the first documents as control points"});
        for (std::size_t d = 0; d < c; ++d) out.indices.push_back(d);
    } else {
        std::vector<std::size_t> all(n);
        for (std::size_t d = 0; d < n; ++d) all[d] = d;
        const auto fit = spherical_kmeans(matrix, all, c, config.seed);
        std::vector<std::vector<std::size_t>> groups(c);
        for (std::size_t d = 0; d < n; ++d) groups[fit.assignment[d]].push_back(d);
        for (const auto& g : groups) out.indices.push_back(medoid(matrix, g));
        std::sort(out.indices.begin(), out.indices.end());
    }
    for (std::size_t d : out.indices) out.ids.push_back(matrix.study_ids()[d]);
    return out;
}

MdsResult classical_mds(const std::vector<std::vector<double>>& distances, std::uint64_t seed) {
    const std::size_t m = distances.size();
    MdsResult out;
    out.positions.resize(m);
    if (m == 0) return out;

    Eigen::MatrixXd sq(m, m);
    for (std::size_t a = 0; a < m; ++a) {
        if (distances[a].size() != m) throw InvalidArgument("classical_mds: distance matrix is not square");
        for (std::size_t b = 0; b < m; ++b) sq(a, b) = distances[a][b] * distances[a][b];
    }
    // B = -1/2 J D² J
    const Eigen::VectorXd row_mean = sq.rowwise().mean();
    const Eigen::RowVectorXd col_mean = sq.colwise().mean();
    const double all_mean = sq.mean();
    Eigen::MatrixXd gram(m, m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            gram(a, b) = -0.5 * (sq(a, b) - row_mean(a) - col_mean(b) + all_mean);
    gram = 0.5 * (gram + gram.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const auto& values = eig.eigenvalues();  // ascending
    const double eps = 1e-9 * std::max(1.0, static_cast<double>(m));
    const double top = values(static_cast<Eigen::Index>(m) - 1);

    if (!(top > eps)) {
        out.warnings.push_back({"", 0, "control points are all identical; placing them on a circle"});
        Rng rng(seed);
        const double phase = 2.0 * std::numbers::pi * rng.uniform();
        for (std::size_t i = 0; i < m; ++i) out.positions[i] = circle_point(i, m, phase);
        return out;
    }

    for (int axis = 0; axis < 2 && axis < static_cast<int>(m); ++axis) {
        const Eigen::Index col = static_cast<Eigen::Index>(m) - 1 - axis;
        const double lambda = values(col) > eps ? values(col) : 0.0;
        Eigen::VectorXd v = eig.eigenvectors().col(col);
        const double vmax = v.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (std::abs(v(i)) > 1e-9 * vmax) {
                if (v(i) < 0) v = -v;
                break;
            }
        }
        const double scale = std::sqrt(lambda);
        for (std::size_t i = 0; i < m; ++i) {
            const double coord = v(static_cast<Eigen::Index>(i)) * scale;
            (axis == 0 ? out.positions[i].x : out.positions[i].y) = coord;
        }
    }
    return out;
}

PlacedControls project_controls(const TermDocumentMatrix& matrix, std::span<const std::size_t> controls,
                                std::uint64_t seed) {
    const std::size_t m = controls.size();
    if (m < 3) throw InvalidArgument("project_controls needs at least 3 control points");
    std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            if (a != b) d[a][b] = 1.0 - matrix.similarity(controls[a], controls[b]);
    auto mds = classical_mds(d, seed);
    PlacedControls out;
    out.indices.assign(controls.begin(), controls.end());
    out.positions = std::move(mds.positions);
    out.warnings = std::move(mds.warnings);
    return out;
}

std::vector<std::size_t> nearest_in_plane(std::span<const Point2> points, std::size_t i, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> d;
    d.reserve(points.size());
    for (std::size_t j = 0; j < points.size(); ++j)
        if (j != i) d.emplace_back(distance(points[i], points[j]), j);
    k = std::min(k, d.size());
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < k; ++a) out.push_back(d[a].second);
    return out;
}

DocumentMapLayout lsp_project(const TermDocumentMatrix& matrix, const PlacedControls& controls,
                              const ProjectionConfig& config) {
    const std::size_t n = matrix.documents();
    const std::size_t k = config.resolved_neighborhood_k(n);
    DocumentMapLayout layout;
    layout.ids = matrix.study_ids();
    layout.positions.assign(n, Point2{});
    layout.is_control.assign(n, false);
    layout.warnings = controls.warnings;
    layout.control_indices = controls.indices;
    for (std::size_t i = 0; i < controls.indices.size(); ++i) {
        const std::size_t c = controls.indices[i];
        if (c >= n) throw InvalidArgument("control index out of range");
        if (layout.is_control[c]) throw InvalidArgument("control points must be distinct");
        layout.is_control[c] = true;
        layout.positions[c] = controls.positions[i];
        layout.control_ids.push_back(layout.ids[c]);
    }
    if (controls.indices.empty()) throw InvalidArgument("lsp_project needs at least one control point");

    const auto term_knn = term_neighbors(matrix, k);
    layout.neighbors = term_knn;

    // Every free point must reach a control through the neighbor graph, or the
    // system is singular. Link each trapped component's medoid to its nearest control.
    while (true) {
        std::vector<std::vector<std::size_t>> reverse(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j : layout.neighbors[i]) reverse[j].push_back(i);
        std::vector<bool> reaches(layout.is_control);
        std::vector<std::size_t> queue(controls.indices);
        while (!queue.empty()) {
            const std::size_t v = queue.back();
            queue.pop_back();
            for (std::size_t u : reverse[v])
                if (!reaches[u]) {
                    reaches[u] = true;
                    queue.push_back(u);
                }
        }
        std::vector<std::size_t> trapped;
        for (std::size_t i = 0; i < n; ++i)
            if (!reaches[i]) trapped.push_back(i);
        if (trapped.empty()) break;

        // weakly connected components among the trapped points
        std::map<std::size_t, std::size_t> component;
        std::size_t next = 0;
        for (std::size_t seed : trapped) {
            if (component.contains(seed)) continue;
            std::vector<std::size_t> stack{seed};
            component[seed] = next;
            while (!stack.empty()) {
                const std::size_t v = stack.back();
                stack.pop_back();
                auto visit = [&](std::size_t u) {
                    if (!reaches[u] && !component.contains(u)) {
                        component[u] = next;
                        stack.push_back(u);
                    }
                };
                for (std::size_t u : layout.neighbors[v]) visit(u);
                for (std::size_t u : reverse[v]) visit(u);
            }
            ++next;
        }
        std::vector<std::vector<std::size_t>> members(next);
        for (auto [i, c] : component) members[c].push_back(i);
        for (const auto& group : members) {
            const std::size_t m = medoid(matrix, group);
            std::size_t nearest = controls.indices.front();
            double best = -1.0;
            for (std::size_t c : controls.indices) {
                const double s = matrix.similarity(m, c);
                if (s > best || (s == best && c < nearest)) {
                    best = s;
                    nearest = c;
                }
            }
            layout.neighbors[m].push_back(nearest);
            layout.warnings.push_back({layout.ids[m], 0,
                                       "neighbor component of " + std::to_string(group.size()) +
                                           " studies holds no control point; linked to control '" +
                                           layout.ids[nearest] + "'"});
        }
    }

    std::vector<std::ptrdiff_t> unknown(n, -1);
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (!layout.is_control[i]) unknown[i] = static_cast<std::ptrdiff_t>(free_count++);

    if (free_count > 0) {
        std::vector<Eigen::Triplet<double>> triplets;
        Eigen::VectorXd bx = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(free_count));
        Eigen::VectorXd by = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(free_count));
        for (std::size_t i = 0; i < n; ++i) {
            if (unknown[i] < 0) continue;
            const auto row = static_cast<Eigen::Index>(unknown[i]);
            triplets.emplace_back(row, row, 1.0);
            const double w = 1.0 / static_cast<double>(layout.neighbors[i].size());
            for (std::size_t j : layout.neighbors[i]) {
                if (unknown[j] >= 0) {
                    triplets.emplace_back(row, static_cast<Eigen::Index>(unknown[j]), -w);
                } else {
                    bx(row) += w * layout.positions[j].x;
                    by(row) += w * layout.positions[j].y;
                }
            }
        }
        Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(free_count), static_cast<Eigen::Index>(free_count));
        a.setFromTriplets(triplets.begin(), triplets.end());
        a.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> solver;
        solver.compute(a);
        if (solver.info() != Eigen::Success) throw Error("document map: reduced Laplacian system is singular");
        const Eigen::VectorXd x = solver.solve(bx);
        const Eigen::VectorXd y = solver.solve(by);
        for (std::size_t i = 0; i < n; ++i) {
            if (unknown[i] < 0) continue;
            layout.positions[i] = {x(unknown[i]), y(unknown[i])};
        }
    }

    if (k > 0) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            auto plane = nearest_in_plane(layout.positions, i, k);
            std::sort(plane.begin(), plane.end());
            auto term = term_knn[i];
            std::sort(term.begin(), term.end());
            std::vector<std::size_t> common;
            std::set_intersection(plane.begin(), plane.end(), term.begin(), term.end(), std::back_inserter(common));
            total += static_cast<double>(common.size()) / static_cast<double>(k);
        }
        layout.quality = total / static_cast<double>(n);
    }
    return layout;
}

DocumentMapLayout project_document_map(const TermDocumentMatrix& matrix, const ProjectionConfig& config) {
    const std::size_t n = matrix.documents();
    if (n >= 3) {
        auto selection = select_control_points(matrix, config);
        auto placed = project_controls(matrix, selection.indices, config.seed);
        placed.warnings.insert(placed.warnings.begin(), selection.warnings.begin(), selection.warnings.end());
        return lsp_project(matrix, placed, config);
    }

    DocumentMapLayout layout;
    layout.ids = matrix.study_ids();
    layout.is_control.assign(n, true);
    layout.neighbors.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        layout.control_indices.push_back(i);
        layout.control_ids.push_back(layout.ids[i]);
    }
    if (n >= 1) layout.positions.push_back({0.0, 0.0});
    if (n == 2) {
        layout.positions.push_back({1.0 - matrix.similarity(0, 1), 0.0});
        layout.neighbors = {{1}, {0}};
        layout.quality = 1.0;
    }
    if (n > 0) layout.warnings.push_back({"", 0, "fewer than 3 studies; every study is a control point"});
    return layout;
}

}  // namespace studymap
