#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotshield {

/// Dense row-major matrix of doubles. Small and simple on purpose: the
/// library works with d x d rotations and d x N datasets where d stays in
/// the tens, so clarity beats BLAS-grade performance.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> entries; // row-major, entries.size() == rows * cols

    Matrix() = default;

    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), entries(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) {
        return entries[i * cols + j];
    }

    double operator()(std::size_t i, std::size_t j) const {
        return entries[i * cols + j];
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    Matrix transposed() const {
        Matrix t(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
};

inline std::string shape_string(const Matrix& m) {
    return std::to_string(m.rows) + "x" + std::to_string(m.cols);
}

/// Standard matrix product. Throws when the inner dimensions disagree,
/// naming both shapes.
inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw std::invalid_argument("mat_mul: dimension mismatch (" +
                                    shape_string(a) + " times " +
                                    shape_string(b) + ")");
    Matrix c(a.rows, b.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

/// sqrt of the sum of squared entries.
inline double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.entries) s += v * v;
    return std::sqrt(s);
}

/// Largest absolute entry (0 for an empty matrix).
inline double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.entries) m = std::max(m, std::abs(v));
    return m;
}

/// Largest absolute entrywise difference; shapes must match.
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("max_abs_diff: shape mismatch (" +
                                    shape_string(a) + " vs " +
                                    shape_string(b) + ")");
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        m = std::max(m, std::abs(a.entries[i] - b.entries[i]));
    return m;
}

/// Guards the "all entries finite" invariant after numeric operations.
inline void ensure_finite(const Matrix& m, const char* what) {
    for (double v : m.entries)
        if (!std::isfinite(v))
            throw std::runtime_error(std::string(what) +
                                     ": non-finite entry produced");
}

} // namespace rotshield
