#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "rotshield/matrix.hpp"

namespace rotshield {

struct QrResult {
    Matrix q; // rows x cols, orthonormal columns
    Matrix r; // cols x cols, upper-triangular with non-negative diagonal
};

/// Householder QR of an m x n matrix with m >= n. The factorization is
/// normalized so every diagonal entry of R is non-negative, which makes the
/// decomposition unique for full-rank input — and makes the Q of a matrix
/// with i.i.d. standard-normal entries exactly Haar-distributed over the
/// orthogonal group.
///
/// Throws std::invalid_argument when m < n and std::runtime_error when a
/// pivot falls below 1e-12 (rank-deficient input).
inline QrResult qr_decompose(const Matrix& a) {
    const std::size_t m = a.rows, n = a.cols;
    if (m < n)
        throw std::invalid_argument("qr_decompose: need rows >= cols, got " +
                                    shape_string(a));
    if (n == 0)
        throw std::invalid_argument("qr_decompose: empty matrix");

    Matrix r = a;                   // reduced in place to upper-triangular
    Matrix q = Matrix::identity(m); // accumulates the product of reflectors
    std::vector<double> v(m);

    for (std::size_t k = 0; k < n; ++k) {
        // Householder vector for column k below the diagonal.
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += r(i, k) * r(i, k);
        norm = std::sqrt(norm);
        if (norm <= 1e-12)
            throw std::runtime_error(
                "qr_decompose: rank-deficient input (zero pivot at column " +
                std::to_string(k) + ")");

        const double x0 = r(k, k);
        const double alpha = (x0 >= 0.0 ? -norm : norm);
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            v[i] = r(i, k);
            if (i == k) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 > 0.0) {
            const double beta = 2.0 / vnorm2;
            // R <- H R on the trailing block.
            for (std::size_t j = k; j < n; ++j) {
                double dot = 0.0;
                for (std::size_t i = k; i < m; ++i) dot += v[i] * r(i, j);
                const double f = beta * dot;
                for (std::size_t i = k; i < m; ++i) r(i, j) -= f * v[i];
            }
            // Q <- Q H (so that a = Q R throughout).
            for (std::size_t i = 0; i < m; ++i) {
                double dot = 0.0;
                for (std::size_t j = k; j < m; ++j) dot += q(i, j) * v[j];
                const double f = beta * dot;
                for (std::size_t j = k; j < m; ++j) q(i, j) -= f * v[j];
            }
        }
        r(k, k) = alpha;
        for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
    }

    // Thin factors, with the diagonal of R made non-negative.
    QrResult out;
    out.q = Matrix(m, n);
    out.r = Matrix(n, n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = (r(j, j) < 0.0) ? -1.0 : 1.0;
        for (std::size_t i = 0; i < m; ++i) out.q(i, j) = s * q(i, j);
        for (std::size_t c = j; c < n; ++c) out.r(j, c) = s * r(j, c);
        if (std::abs(out.r(j, j)) <= 1e-12)
            throw std::runtime_error(
                "qr_decompose: rank-deficient input (zero pivot at column " +
                std::to_string(j) + ")");
    }
    ensure_finite(out.q, "qr_decompose");
    ensure_finite(out.r, "qr_decompose");
    return out;
}

} // namespace rotshield
