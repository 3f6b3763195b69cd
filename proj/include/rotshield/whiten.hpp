#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotshield/dataset.hpp"
#include "rotshield/eig.hpp"
#include "rotshield/matrix.hpp"

namespace rotshield {

struct WhitenResult {
    Dataset whitened;          // zero mean, identity covariance
    Matrix whitening;          // d x d map applied to the centered data
    std::vector<double> mean;  // per-attribute mean removed before the map
};

/// Centers the data and maps it to identity covariance via the covariance
/// eigendecomposition: W = diag(lambda^-1/2) E^T. The covariance uses the
/// 1/N (population) divisor. Throws std::invalid_argument when N <= d and
/// std::runtime_error when the covariance is singular (smallest eigenvalue
/// <= 1e-12), naming the deficient eigen-direction.
inline WhitenResult whiten(const Dataset& y) {
    const std::size_t d = y.d, N = y.N;
    if (N <= d)
        throw std::invalid_argument("whiten: need more records than attributes (N = " +
                                    std::to_string(N) + ", d = " + std::to_string(d) + ")");

    WhitenResult out;
    out.mean.assign(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < N; ++j) s += y.values(i, j);
        out.mean[i] = s / static_cast<double>(N);
    }

    Matrix cov(d, d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = i; k < d; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < N; ++j)
                s += (y.values(i, j) - out.mean[i]) * (y.values(k, j) - out.mean[k]);
            const double c = s / static_cast<double>(N);
            cov(i, k) = c;
            cov(k, i) = c;
        }
    }

    const EigResult eig = sym_eig(cov);
    for (std::size_t i = 0; i < d; ++i) {
        if (eig.values[i] <= 1e-12)
            throw std::runtime_error(
                "whiten: covariance singular along eigen-direction " +
                std::to_string(i) + " (eigenvalue " +
                std::to_string(eig.values[i]) + ")");
    }

    out.whitening = Matrix(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const double inv_sqrt = 1.0 / std::sqrt(eig.values[i]);
        for (std::size_t j = 0; j < d; ++j)
            out.whitening(i, j) = inv_sqrt * eig.vectors(j, i); // row i of E^T
    }

    out.whitened = Dataset(d, N);
    out.whitened.attribute_names = y.attribute_names;
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                s += out.whitening(i, k) * (y.values(k, j) - out.mean[k]);
            out.whitened.values(i, j) = s;
        }
    }
    validate_dataset(out.whitened, "whiten");
    return out;
}

} // namespace rotshield
