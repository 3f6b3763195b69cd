#pragma once

#include <cstdint>
#include <stdexcept>

#include "rotshield/matrix.hpp"
#include "rotshield/qr.hpp"
#include "rotshield/rng.hpp"

namespace rotshield {

/// Square orthogonal matrix: matrix * matrix^T = I to 1e-10 max-norm.
struct RotationMatrix {
    std::size_t dim = 0;
    Matrix matrix;
};

/// Reserved seed for which random_orthogonal returns the identity matrix.
/// Exists so tests can force a no-op rotation through the ordinary code
/// path; a derived part seed collides with it with probability 2^-64.
inline constexpr std::uint64_t identity_rotation_seed = 0xffffffffffffffffULL;

/// Haar-uniform random orthogonal matrix: QR of a matrix of i.i.d. standard
/// normals. qr_decompose pins R's diagonal non-negative, which is exactly
/// the normalization that makes Q Haar-distributed. Deterministic in seed.
inline RotationMatrix random_orthogonal(std::size_t dim, std::uint64_t seed) {
    if (dim == 0)
        throw std::invalid_argument("random_orthogonal: dim must be >= 1");

    RotationMatrix rot;
    rot.dim = dim;
    if (seed == identity_rotation_seed) {
        rot.matrix = Matrix::identity(dim);
        return rot;
    }

    Rng rng(seed);
    Matrix g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.normal();

    rot.matrix = qr_decompose(g).q;

    // Defend the orthogonality invariant before anything downstream uses it.
    const Matrix qqt = mat_mul(rot.matrix, rot.matrix.transposed());
    if (max_abs_diff(qqt, Matrix::identity(dim)) > 1e-10)
        throw std::runtime_error("random_orthogonal: orthogonality drifted");
    return rot;
}

} // namespace rotshield
