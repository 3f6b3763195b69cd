#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotshield/matrix.hpp"

namespace rotshield {

struct EigResult {
    std::vector<double> values; // sorted descending
    Matrix vectors;             // column i is the eigenvector of values[i]
};

/// Symmetric eigendecomposition by cyclic Jacobi sweeps. Accurate to machine
/// precision for the small dense matrices this library uses (covariances and
/// decorrelation products, dimension <= a few dozen).
///
/// Convergence: sweeps run until every off-diagonal magnitude is <= 1e-12,
/// with a cap of 100 sweeps. Eigenpairs come back sorted by descending value
/// and each eigenvector is sign-normalized so its largest-magnitude entry is
/// positive, making the output deterministic.
///
/// Throws std::invalid_argument for non-square or asymmetric (beyond 1e-10)
/// input.
inline EigResult sym_eig(const Matrix& a) {
    const std::size_t n = a.rows;
    if (n == 0 || a.cols != n)
        throw std::invalid_argument("sym_eig: matrix must be square, got " +
                                    shape_string(a));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-10)
                throw std::invalid_argument(
                    "sym_eig: input asymmetric at (" + std::to_string(i) +
                    "," + std::to_string(j) + ")");

    Matrix w = a;                     // working copy, driven to diagonal form
    Matrix v = Matrix::identity(n);   // accumulated rotations

    constexpr double off_tol = 1e-12;
    constexpr std::size_t max_sweeps = 100;

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off = std::max(off, std::abs(w(p, q)));
        if (off <= off_tol) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (std::abs(apq) <= off_tol) continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t i = 0; i < n; ++i) {
                    const double wip = w(i, p), wiq = w(i, q);
                    w(i, p) = c * wip - s * wiq;
                    w(i, q) = s * wip + c * wiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double wpj = w(p, j), wqj = w(q, j);
                    w(p, j) = c * wpj - s * wqj;
                    w(q, j) = s * wpj + c * wqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    // Collect, sort descending, fix signs.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = w(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

    EigResult out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t src = order[c];
        out.values[c] = diag[src];
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double mag = std::abs(v(i, src));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        const double sgn = (v(arg, src) < 0.0) ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = sgn * v(i, src);
    }
    ensure_finite(out.vectors, "sym_eig");
    return out;
}

} // namespace rotshield
