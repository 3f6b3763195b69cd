#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rotshield/partition.hpp"
#include "rotshield/rng.hpp"

namespace rotshield {

/// Derives the rotation seed for part i from the master seed. The mixing is
/// pinned (splitmix64 both ways) so a key file storing only the master seed
/// reproduces every part rotation forever.
inline std::uint64_t derive_part_seed(std::uint64_t master_seed, std::size_t i) {
    return splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(i) + 1));
}

/// Secret perturbation key: one master seed, the record partitioning, the
/// derived per-part rotation seeds, the attribute count, and whether the
/// owner normalized records before perturbing. Everything except n and the
/// partition boundaries is secret.
struct PerturbationKey {
    std::uint64_t master_seed = 0;
    Partitioning partitioning;
    std::vector<std::uint64_t> part_seeds; // derived, length = num_parts
    std::size_t d = 0;
    bool normalization_applied = true;
};

/// Builds a key for N records split into n parts.
inline PerturbationKey make_key(std::uint64_t master_seed, std::size_t N,
                                std::size_t n, std::size_t d,
                                bool normalization_applied = true) {
    if (d == 0) throw std::invalid_argument("make_key: d must be >= 1");
    PerturbationKey key;
    key.master_seed = master_seed;
    key.partitioning = make_partitioning(N, n);
    key.part_seeds.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        key.part_seeds[i] = derive_part_seed(master_seed, i);
    key.d = d;
    key.normalization_applied = normalization_applied;
    return key;
}

/// Re-derives part seeds (after loading a key file) and checks invariants.
inline void rederive_part_seeds(PerturbationKey& key) {
    validate_partitioning(key.partitioning);
    key.part_seeds.resize(key.partitioning.num_parts);
    for (std::size_t i = 0; i < key.part_seeds.size(); ++i)
        key.part_seeds[i] = derive_part_seed(key.master_seed, i);
}

} // namespace rotshield
