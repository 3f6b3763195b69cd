#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotshield {

/// Contiguous partition of record indices [0, N) into n blocks whose sizes
/// differ by at most one. boundaries has n+1 strictly increasing entries,
/// starting at 0 and ending at N; block i is [boundaries[i], boundaries[i+1]).
struct Partitioning {
    std::size_t num_parts = 0;
    std::vector<std::size_t> boundaries;

    std::size_t num_records() const {
        return boundaries.empty() ? 0 : boundaries.back();
    }

    std::size_t part_begin(std::size_t i) const { return boundaries[i]; }
    std::size_t part_end(std::size_t i) const { return boundaries[i + 1]; }
    std::size_t part_size(std::size_t i) const {
        return boundaries[i + 1] - boundaries[i];
    }

    /// Index of the block containing record j.
    std::size_t part_of(std::size_t j) const {
        for (std::size_t i = 0; i < num_parts; ++i)
            if (j < boundaries[i + 1]) return i;
        throw std::out_of_range("Partitioning::part_of: record " +
                                std::to_string(j) + " out of range");
    }
};

/// Validates the structural invariants of a Partitioning (used after
/// deserialization as well as construction).
inline void validate_partitioning(const Partitioning& p) {
    if (p.num_parts == 0 || p.boundaries.size() != p.num_parts + 1)
        throw std::invalid_argument("Partitioning: boundary count must be n+1");
    if (p.boundaries.front() != 0)
        throw std::invalid_argument("Partitioning: boundaries must start at 0");
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < p.num_parts; ++i) {
        if (p.boundaries[i + 1] <= p.boundaries[i])
            throw std::invalid_argument(
                "Partitioning: boundaries must be strictly increasing");
        const std::size_t sz = p.boundaries[i + 1] - p.boundaries[i];
        if (i == 0) {
            lo = hi = sz;
        } else {
            lo = std::min(lo, sz);
            hi = std::max(hi, sz);
        }
    }
    if (hi - lo > 1)
        throw std::invalid_argument(
            "Partitioning: part sizes must differ by at most 1");
}

/// Splits [0, N) into n contiguous blocks of near-equal size; when N is not
/// divisible by n, the first N mod n blocks receive one extra record.
inline Partitioning make_partitioning(std::size_t N, std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("make_partitioning: n must be >= 1");
    if (n > N)
        throw std::invalid_argument("make_partitioning: n = " +
                                    std::to_string(n) + " exceeds N = " +
                                    std::to_string(N));
    Partitioning p;
    p.num_parts = n;
    p.boundaries.resize(n + 1);
    const std::size_t base = N / n, rem = N % n;
    p.boundaries[0] = 0;
    for (std::size_t i = 0; i < n; ++i)
        p.boundaries[i + 1] = p.boundaries[i] + base + (i < rem ? 1 : 0);
    return p;
}

} // namespace rotshield
