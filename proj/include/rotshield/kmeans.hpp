#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotshield/assignment.hpp"
#include "rotshield/matrix.hpp"
#include "rotshield/rng.hpp"

namespace rotshield {

struct ClusteringResult {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;       // label per record, in [0, k)
    std::vector<std::vector<double>> centroids; // k centroids
    double inertia = 0.0; // sum of squared distances to assigned centroids
};

namespace detail {

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double dlt = a[i] - b[i];
        s += dlt * dlt;
    }
    return s;
}

} // namespace detail

/// Lloyd's algorithm with k-means++ seeding, `restarts` independent starts
/// (best inertia kept), and convergence when assignments stabilize or
/// max_iter passes. Every random choice comes from one sequential stream
/// seeded by `seed`, and k-means++ picks data points as initial centroids,
/// so the outcome is a pure function of (record order, k, seed) — and
/// invariant under any isometry applied to all points at once.
inline ClusteringResult kmeans(const std::vector<std::vector<double>>& points,
                               std::size_t k, std::uint64_t seed,
                               std::size_t restarts = 10,
                               std::size_t max_iter = 300) {
    const std::size_t n = points.size();
    if (k == 0) throw std::invalid_argument("kmeans: k must be >= 1");
    if (k > n)
        throw std::invalid_argument("kmeans: k = " + std::to_string(k) +
                                    " exceeds the number of points " +
                                    std::to_string(n));
    const std::size_t dim = points[0].size();
    for (const auto& p : points)
        if (p.size() != dim)
            throw std::invalid_argument("kmeans: points have mixed dimensions");

    Rng rng(seed);
    ClusteringResult best;
    best.inertia = std::numeric_limits<double>::infinity();

    for (std::size_t rs = 0; rs < restarts; ++rs) {
        // k-means++ seeding over record indices.
        std::vector<std::vector<double>> centroids;
        centroids.reserve(k);
        centroids.push_back(points[static_cast<std::size_t>(rng.next_u64() % n)]);
        std::vector<double> w(n);
        while (centroids.size() < k) {
            double total = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double m = std::numeric_limits<double>::infinity();
                for (const auto& c : centroids)
                    m = std::min(m, detail::sq_dist(points[j], c));
                w[j] = m;
                total += m;
            }
            std::size_t pick;
            if (total > 0.0) {
                const double r = rng.uniform() * total;
                double cum = 0.0;
                pick = n - 1;
                for (std::size_t j = 0; j < n; ++j) {
                    cum += w[j];
                    if (cum > r) {
                        pick = j;
                        break;
                    }
                }
            } else {
                // All remaining points coincide with chosen centroids.
                pick = static_cast<std::size_t>(rng.next_u64() % n);
            }
            centroids.push_back(points[pick]);
        }

        std::vector<std::size_t> assign(n, 0), prev(n, k);
        for (std::size_t iter = 0; iter < max_iter; ++iter) {
            for (std::size_t j = 0; j < n; ++j) {
                std::size_t arg = 0;
                double bestd = detail::sq_dist(points[j], centroids[0]);
                for (std::size_t c = 1; c < k; ++c) {
                    const double dd = detail::sq_dist(points[j], centroids[c]);
                    if (dd < bestd) {
                        bestd = dd;
                        arg = c;
                    }
                }
                assign[j] = arg;
            }
            if (assign == prev) break;
            prev = assign;

            for (std::size_t c = 0; c < k; ++c) {
                std::vector<double> sum(dim, 0.0);
                std::size_t count = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (assign[j] != c) continue;
                    ++count;
                    for (std::size_t i = 0; i < dim; ++i) sum[i] += points[j][i];
                }
                if (count > 0)
                    for (std::size_t i = 0; i < dim; ++i)
                        centroids[c][i] = sum[i] / static_cast<double>(count);
                // An emptied cluster keeps its previous centroid.
            }
        }

        double inertia = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            inertia += detail::sq_dist(points[j], centroids[assign[j]]);

        if (inertia < best.inertia) {
            best.k = k;
            best.assignments = assign;
            best.centroids = centroids;
            best.inertia = inertia;
        }
    }
    return best;
}

/// Fraction of records on which two clusterings agree under the best global
/// label matching (exact assignment over the k x k contingency table).
inline double cluster_agreement(const ClusteringResult& a,
                                const ClusteringResult& b) {
    if (a.assignments.size() != b.assignments.size())
        throw std::invalid_argument("cluster_agreement: record counts differ (" +
                                    std::to_string(a.assignments.size()) + " vs " +
                                    std::to_string(b.assignments.size()) + ")");
    if (a.k != b.k)
        throw std::invalid_argument("cluster_agreement: cluster counts differ (" +
                                    std::to_string(a.k) + " vs " +
                                    std::to_string(b.k) + ")");
    const std::size_t n = a.assignments.size();
    if (n == 0) throw std::invalid_argument("cluster_agreement: empty clusterings");

    Matrix contingency(a.k, a.k, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        contingency(a.assignments[j], b.assignments[j]) += 1.0;

    Matrix cost(a.k, a.k);
    for (std::size_t i = 0; i < a.k; ++i)
        for (std::size_t j = 0; j < a.k; ++j) cost(i, j) = -contingency(i, j);

    const std::vector<std::size_t> match = min_cost_assignment(cost);
    double agreed = 0.0;
    for (std::size_t i = 0; i < a.k; ++i) agreed += contingency(i, match[i]);
    return agreed / static_cast<double>(n);
}

} // namespace rotshield
