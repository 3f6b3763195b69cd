#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotshield/dataset.hpp"
#include "rotshield/key.hpp"
#include "rotshield/partition.hpp"
#include "rotshield/rotation.hpp"

namespace rotshield {

namespace detail {

inline void check_perturb_args(const Dataset& x, const PerturbationKey& key,
                               const char* what) {
    if (!x.unit_normalized)
        throw std::invalid_argument(std::string(what) +
                                    ": dataset must be unit-normalized first");
    if (x.d != key.d)
        throw std::invalid_argument(std::string(what) + ": key is for d = " +
                                    std::to_string(key.d) + ", dataset has d = " +
                                    std::to_string(x.d));
    if (key.partitioning.num_records() != x.N)
        throw std::invalid_argument(
            std::string(what) + ": key partitions " +
            std::to_string(key.partitioning.num_records()) +
            " records, dataset has " + std::to_string(x.N));
    if (key.part_seeds.size() != key.partitioning.num_parts)
        throw std::invalid_argument(std::string(what) +
                                    ": key part seeds not derived");
}

/// Applies rot (or its transpose) to the columns [lo, hi) of src into dst.
inline void rotate_block(const Matrix& rot, bool transpose, const Dataset& src,
                         Dataset& dst, std::size_t lo, std::size_t hi) {
    const std::size_t d = src.d;
    std::vector<double> tmp(d);
    for (std::size_t j = lo; j < hi; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                s += (transpose ? rot(k, i) : rot(i, k)) * src.values(k, j);
            tmp[i] = s;
        }
        for (std::size_t i = 0; i < d; ++i) dst.values(i, j) = tmp[i];
    }
}

} // namespace detail

/// Perturbs a unit-normalized dataset: each partition block of records is
/// rotated by an independent seeded orthogonal matrix. Deterministic in the
/// key; the output is released data (still unit-normalized — rotations
/// preserve length).
inline Dataset perturb(const Dataset& x, const PerturbationKey& key) {
    detail::check_perturb_args(x, key, "perturb");
    Dataset y = x;
    for (std::size_t p = 0; p < key.partitioning.num_parts; ++p) {
        const RotationMatrix rot = random_orthogonal(key.d, key.part_seeds[p]);
        detail::rotate_block(rot.matrix, false, x, y,
                             key.partitioning.part_begin(p),
                             key.partitioning.part_end(p));
    }
    validate_dataset(y, "perturb");
    return y;
}

/// Owner-side inverse: applies each part's transposed rotation, recovering
/// the normalized input exactly (up to floating-point roundoff).
inline Dataset invert_perturbation(const Dataset& y, const PerturbationKey& key) {
    detail::check_perturb_args(y, key, "invert_perturbation");
    Dataset x = y;
    for (std::size_t p = 0; p < key.partitioning.num_parts; ++p) {
        const RotationMatrix rot = random_orthogonal(key.d, key.part_seeds[p]);
        detail::rotate_block(rot.matrix, true, y, x,
                             key.partitioning.part_begin(p),
                             key.partitioning.part_end(p));
    }
    validate_dataset(x, "invert_perturbation");
    return x;
}

/// All record-pair inner products between two datasets perturbed with the
/// same key, organized by partition blocks. Only same-part (diagonal-block)
/// entries equal the original-space inner products; distance_faithful tells
/// the two apart.
struct BlockInnerProducts {
    Matrix gram; // N x N; gram(i, j) = record i of y1 . record j of y2
    Partitioning partitioning;

    /// True when records i and j fall in the same part, i.e. their entry
    /// reflects the original data's inner product.
    bool distance_faithful(std::size_t rec_i, std::size_t rec_j) const {
        return partitioning.part_of(rec_i) == partitioning.part_of(rec_j);
    }
};

inline BlockInnerProducts inner_product_block(const Dataset& y1,
                                              const Dataset& y2,
                                              const Partitioning& p) {
    if (y1.d != y2.d || y1.N != y2.N)
        throw std::invalid_argument(
            "inner_product_block: datasets must share shape, got " +
            shape_string(y1.values) + " vs " + shape_string(y2.values));
    validate_partitioning(p);
    if (p.num_records() != y1.N)
        throw std::invalid_argument(
            "inner_product_block: partitioning covers " +
            std::to_string(p.num_records()) + " records, datasets have " +
            std::to_string(y1.N));

    BlockInnerProducts out;
    out.partitioning = p;
    out.gram = Matrix(y1.N, y1.N);
    for (std::size_t i = 0; i < y1.N; ++i)
        for (std::size_t j = 0; j < y2.N; ++j)
            out.gram(i, j) = record_dot(y1, i, y2, j);
    return out;
}

/// Distance between two unit vectors from their inner product:
/// sqrt(2 - 2 ip). The input is clamped to [-1, 1] after a sanity window of
/// +-1e-9 that catches non-unit inputs.
inline double distance_from_inner(double ip) {
    if (ip < -1.0 - 1e-9 || ip > 1.0 + 1e-9)
        throw std::invalid_argument(
            "distance_from_inner: inner product " + std::to_string(ip) +
            " outside [-1, 1]; inputs are not unit vectors");
    ip = std::min(1.0, std::max(-1.0, ip));
    return std::sqrt(2.0 - 2.0 * ip);
}

/// Per-record distances between two same-key perturbations: record j of y1
/// vs record j of y2. Because corresponding records share a rotation, these
/// equal the original-space distances.
inline std::vector<double> corresponding_distances(const Dataset& y1,
                                                   const Dataset& y2,
                                                   const Partitioning& p) {
    if (y1.d != y2.d || y1.N != y2.N)
        throw std::invalid_argument(
            "corresponding_distances: datasets must share shape, got " +
            shape_string(y1.values) + " vs " + shape_string(y2.values));
    validate_partitioning(p);
    if (p.num_records() != y1.N)
        throw std::invalid_argument(
            "corresponding_distances: partitioning does not cover the records");

    std::vector<double> out(y1.N);
    for (std::size_t j = 0; j < y1.N; ++j)
        out[j] = distance_from_inner(record_dot(y1, j, y2, j));
    return out;
}

/// Scalar privacy score: mean over attributes of the (population) variance
/// of the entrywise displacement y - x. Zero when nothing moved; grows with
/// how far the perturbation displaced the data.
inline double difference_covariance(const Dataset& x, const Dataset& y) {
    if (x.d != y.d || x.N != y.N)
        throw std::invalid_argument(
            "difference_covariance: datasets must share shape, got " +
            shape_string(x.values) + " vs " + shape_string(y.values));
    if (x.N == 0) throw std::invalid_argument("difference_covariance: empty data");

    double score = 0.0;
    for (std::size_t i = 0; i < x.d; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < x.N; ++j)
            mean += y.values(i, j) - x.values(i, j);
        mean /= static_cast<double>(x.N);
        double var = 0.0;
        for (std::size_t j = 0; j < x.N; ++j) {
            const double c = (y.values(i, j) - x.values(i, j)) - mean;
            var += c * c;
        }
        score += var / static_cast<double>(x.N);
    }
    return score / static_cast<double>(x.d);
}

} // namespace rotshield
