#pragma once

// Shared fixtures for the test suite. Clustering fixtures place points in
// angular blobs: unit normalization keeps angular separation, so every
// clustering claim survives the owner-side normalization step.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rotshield/dataset.hpp"
#include "rotshield/rng.hpp"

namespace testsupport {

/// k well-separated unit directions in R^d, found by seeded rejection
/// sampling (pairwise angle >= 60 degrees).
inline std::vector<std::vector<double>> blob_directions(std::size_t d,
                                                        std::size_t k,
                                                        rotshield::Rng& rng) {
    std::vector<std::vector<double>> dirs;
    const double max_dot = 0.5; // cos 60°
    std::size_t attempts = 0;
    while (dirs.size() < k) {
        if (++attempts > 100000)
            throw std::runtime_error("blob_directions: cannot separate that many blobs");
        std::vector<double> v(d);
        double nrm = 0.0;
        for (double& c : v) {
            c = rng.normal();
            nrm += c * c;
        }
        nrm = std::sqrt(nrm);
        for (double& c : v) c /= nrm;
        bool ok = true;
        for (const auto& u : dirs) {
            double dot = 0.0;
            for (std::size_t i = 0; i < d; ++i) dot += u[i] * v[i];
            if (std::abs(dot) > max_dot) ok = false;
        }
        if (ok) dirs.push_back(std::move(v));
    }
    return dirs;
}

/// N records in k angular blobs with varying radii. `labels_out` receives
/// the generating blob of each record. Records are written in round-robin
/// blob order so every partition of the record range cuts across all blobs.
inline rotshield::Dataset blob_dataset(std::size_t d, std::size_t N,
                                       std::size_t k, std::uint64_t seed,
                                       std::vector<std::size_t>* labels_out = nullptr) {
    rotshield::Rng rng(seed);
    const auto dirs = blob_directions(d, k, rng);
    rotshield::Dataset x(d, N);
    if (labels_out) labels_out->resize(N);
    const double spread = 0.08; // angular noise, small vs 60° separation
    for (std::size_t j = 0; j < N; ++j) {
        const std::size_t blob = j % k;
        if (labels_out) (*labels_out)[j] = blob;
        const double radius = rng.uniform(0.5, 2.0); // erased by normalization
        double nrm = 0.0;
        std::vector<double> v(d);
        for (std::size_t i = 0; i < d; ++i) {
            v[i] = dirs[blob][i] + spread * rng.normal();
            nrm += v[i] * v[i];
        }
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < d; ++i) x.values(i, j) = radius * v[i] / nrm;
    }
    return x;
}

/// A pair of slot-feature matrices imitating two days of server logs: most
/// slots behave alike in both logs; the listed slots are anomalous in the
/// second log (traffic shifted to a far direction). The per-slot distance
/// between the logs separates anomalous from normal slots by a wide margin.
struct AccessLogPair {
    rotshield::Dataset log_a;
    rotshield::Dataset log_b;
    std::vector<std::size_t> anomalous; // slot indices
};

inline AccessLogPair access_log_pair(std::size_t d, std::size_t slots,
                                     std::size_t anomalies, std::uint64_t seed) {
    rotshield::Rng rng(seed);
    const auto dirs = blob_directions(d, 2, rng); // normal vs anomalous profile
    AccessLogPair out;
    out.log_a = rotshield::Dataset(d, slots);
    out.log_b = rotshield::Dataset(d, slots);
    out.anomalous = rng.sample_indices(slots, anomalies);
    std::vector<bool> is_anon(slots, false);
    for (std::size_t j : out.anomalous) is_anon[j] = true;
    for (std::size_t j = 0; j < slots; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            const double base = dirs[0][i] + 0.02 * rng.normal();
            out.log_a.values(i, j) = base;
            out.log_b.values(i, j) =
                is_anon[j] ? dirs[1][i] + 0.02 * rng.normal()
                           : base + 0.01 * rng.normal();
        }
    }
    return out;
}

} // namespace testsupport
