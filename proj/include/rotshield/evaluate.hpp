#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotshield/attack.hpp"
#include "rotshield/dataset.hpp"
#include "rotshield/kde.hpp"
#include "rotshield/key.hpp"
#include "rotshield/kmeans.hpp"
#include "rotshield/perturb.hpp"
#include "rotshield/rng.hpp"

namespace rotshield {

/// How well a small subsample's KDE extrapolates the full sample's density.
struct ExtrapolationReport {
    std::size_t N = 0;
    double fraction = 0.0;
    std::uint64_t seed = 0;
    double divergence = 0.0;
    double similarity = 0.0; // 1 - divergence
};

/// Draws N standard-normal points, fits a KDE to a `fraction` subsample and
/// to the full sample, and reports similarity = 1 - divergence between the
/// two fits. fraction = 1 compares the fit with itself (similarity exactly
/// 1); fractions below 1 measure how much distribution knowledge a partial
/// sample already gives away.
inline ExtrapolationReport run_experiment1(std::size_t N, double fraction,
                                           std::uint64_t seed) {
    if (N < 1000)
        throw std::invalid_argument("run_experiment1: need N >= 1000");
    if (!(fraction > 0.0) || fraction > 1.0)
        throw std::invalid_argument("run_experiment1: fraction must lie in (0, 1]");

    Rng rng(seed);
    std::vector<double> full(N);
    for (double& v : full) v = rng.normal();

    std::vector<double> sub;
    if (fraction == 1.0) {
        sub = full;
    } else {
        const std::size_t m = static_cast<std::size_t>(
            std::llround(fraction * static_cast<double>(N)));
        const std::vector<std::size_t> idx =
            rng.sample_indices(N, std::max<std::size_t>(m, 8));
        sub.reserve(idx.size());
        for (std::size_t j : idx) sub.push_back(full[j]);
    }

    const KdeModel kf = kde_fit(sub);
    const KdeModel kg = kde_fit(full);
    const double div =
        density_divergence(kf, kg, default_divergence_config(kf, kg));

    ExtrapolationReport rep;
    rep.N = N;
    rep.fraction = fraction;
    rep.seed = seed;
    rep.divergence = div;
    rep.similarity = 1.0 - div;
    return rep;
}

/// One attack run inside the accuracy sweep.
struct SweepCell {
    std::size_t n = 0;
    double fraction = 0.0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    bool converged = false;
};

/// Per-(n, fraction) aggregate over the sweep's seeds. Mean and stddev are
/// taken over converged cells only; non_converged counts the rest.
struct SweepSummaryRow {
    std::size_t n = 0;
    double fraction = 0.0;
    double mean_accuracy = 0.0;
    double stddev = 0.0;
    std::size_t cells = 0;
    std::size_t non_converged = 0;
};

namespace detail {

/// Rotation-key master seed for a sweep cell: depends on (seed, n) only, so
/// every fraction of a cell row sees the same released data.
inline std::uint64_t sweep_master_seed(std::uint64_t seed, std::size_t n) {
    return splitmix64(seed ^ splitmix64(0x726f746174ULL + n));
}

/// Stream seed for the known-record permutation: depends on the sweep seed
/// only. Fractions take prefixes of one permutation, so a larger fraction's
/// known set contains the smaller one's — the attacker's knowledge grows.
inline std::uint64_t sweep_known_seed(std::uint64_t seed) {
    return splitmix64(seed ^ 0x6b6e6f776eULL);
}

inline SweepCell run_sweep_cell(const Dataset& normalized,
                                const std::vector<std::pair<double, double>>& bounds,
                                std::size_t n, double fraction,
                                std::uint64_t seed) {
    const std::size_t N = normalized.N;
    const PerturbationKey key =
        make_key(sweep_master_seed(seed, n), N, n, normalized.d, true);
    const Dataset released = perturb(normalized, key);

    std::size_t m = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(N)));
    m = std::max<std::size_t>(2, std::min(m, N - 1));
    std::vector<std::size_t> idx = Rng(sweep_known_seed(seed)).permutation(N);
    idx.resize(m);
    const Dataset known = subset_records(normalized, idx);

    DivergenceConfig cfg;
    cfg.grid_lo = -12.0;
    cfg.grid_hi = 12.0;
    cfg.grid_points = 512;

    const AttackReport report = ak_ica_attack(released, known, idx, bounds, cfg);

    SweepCell cell;
    cell.n = n;
    cell.fraction = fraction;
    cell.seed = seed;
    cell.accuracy = reconstruction_accuracy(report.reconstructed, normalized);
    cell.converged = report.converged;
    return cell;
}

} // namespace detail

/// Full factorial attack sweep: for every (n, fraction, seed) cell the data
/// is perturbed with n parts and attacked with the given known fraction, and
/// the reconstruction accuracy against the normalized original is recorded.
/// Cells are independent; `jobs` > 1 runs them on that many threads. Results
/// are written by cell coordinate, so the output is bit-identical regardless
/// of jobs.
inline std::vector<SweepCell> run_figure1_sweep(
    const Dataset& data, const std::vector<std::size_t>& ns,
    const std::vector<double>& fractions,
    const std::vector<std::uint64_t>& seeds, std::size_t jobs = 1) {
    if (ns.empty() || fractions.empty() || seeds.empty())
        throw std::invalid_argument("run_figure1_sweep: ns, fractions and seeds must be nonempty");
    for (double f : fractions)
        if (!(f > 0.0 && f < 1.0))
            throw std::invalid_argument("run_figure1_sweep: fractions must lie in (0, 1)");
    for (std::size_t n : ns)
        if (n == 0 || n > data.N)
            throw std::invalid_argument("run_figure1_sweep: invalid part count " +
                                        std::to_string(n));

    const Dataset normalized =
        data.unit_normalized ? data : normalize_to_unit(data).data;
    const std::vector<std::pair<double, double>> bounds =
        attribute_bounds(normalized);

    struct Coord {
        std::size_t n;
        double fraction;
        std::uint64_t seed;
    };
    std::vector<Coord> coords;
    coords.reserve(ns.size() * fractions.size() * seeds.size());
    for (std::size_t n : ns)
        for (double f : fractions)
            for (std::uint64_t s : seeds) coords.push_back({n, f, s});

    std::vector<SweepCell> cells(coords.size());
    const std::size_t workers = std::max<std::size_t>(1, jobs);
    if (workers == 1) {
        for (std::size_t c = 0; c < coords.size(); ++c)
            cells[c] = detail::run_sweep_cell(normalized, bounds, coords[c].n,
                                              coords[c].fraction, coords[c].seed);
    } else {
        std::vector<std::future<void>> futures;
        futures.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            futures.push_back(std::async(std::launch::async, [&, w]() {
                for (std::size_t c = w; c < coords.size(); c += workers)
                    cells[c] = detail::run_sweep_cell(normalized, bounds,
                                                      coords[c].n,
                                                      coords[c].fraction,
                                                      coords[c].seed);
            }));
        }
        for (auto& f : futures) f.get();
    }
    return cells;
}

/// Groups sweep cells by (n, fraction) in first-appearance order.
inline std::vector<SweepSummaryRow> summarize_sweep(
    const std::vector<SweepCell>& cells) {
    std::vector<SweepSummaryRow> rows;
    for (const SweepCell& c : cells) {
        SweepSummaryRow* row = nullptr;
        for (SweepSummaryRow& r : rows)
            if (r.n == c.n && r.fraction == c.fraction) {
                row = &r;
                break;
            }
        if (row == nullptr) {
            rows.push_back({c.n, c.fraction, 0.0, 0.0, 0, 0});
            row = &rows.back();
        }
        row->cells += 1;
        if (!c.converged) row->non_converged += 1;
    }
    for (SweepSummaryRow& r : rows) {
        double sum = 0.0, sum2 = 0.0;
        std::size_t m = 0;
        for (const SweepCell& c : cells) {
            if (c.n != r.n || c.fraction != r.fraction || !c.converged) continue;
            sum += c.accuracy;
            sum2 += c.accuracy * c.accuracy;
            ++m;
        }
        if (m > 0) {
            r.mean_accuracy = sum / static_cast<double>(m);
            const double var =
                std::max(0.0, sum2 / static_cast<double>(m) -
                                  r.mean_accuracy * r.mean_accuracy);
            r.stddev = std::sqrt(var);
        }
    }
    return rows;
}

/// The third-party side of difference clustering: given two perturbed logs
/// and the public partitioning, compute per-slot distances between
/// corresponding records and cluster the slots by that scalar.
inline ClusteringResult cluster_corresponding(const Dataset& released_a,
                                              const Dataset& released_b,
                                              const Partitioning& part,
                                              std::size_t k, std::uint64_t seed) {
    const std::vector<double> dist =
        corresponding_distances(released_a, released_b, part);
    std::vector<std::vector<double>> points(dist.size());
    for (std::size_t j = 0; j < dist.size(); ++j) points[j] = {dist[j]};
    return kmeans(points, k, seed);
}

/// Owner + third-party flow for difference clustering: both logs are
/// normalized and perturbed with the same key, the third party computes the
/// per-slot distances between corresponding records, and k-means clusters
/// the slots by that scalar distance. Because corresponding records share a
/// rotation, the distances equal the plaintext ones and the clustering
/// matches the plaintext pipeline.
inline ClusteringResult run_application3(const Dataset& log_a,
                                         const Dataset& log_b,
                                         const PerturbationKey& key,
                                         std::size_t k, std::uint64_t seed) {
    if (log_a.d != log_b.d || log_a.N != log_b.N)
        throw std::invalid_argument("run_application3: logs must share shape, got " +
                                    shape_string(log_a.values) + " vs " +
                                    shape_string(log_b.values));
    const Dataset na =
        log_a.unit_normalized ? log_a : normalize_to_unit(log_a).data;
    const Dataset nb =
        log_b.unit_normalized ? log_b : normalize_to_unit(log_b).data;
    const Dataset ya = perturb(na, key);
    const Dataset yb = perturb(nb, key);
    return cluster_corresponding(ya, yb, key.partitioning, k, seed);
}

/// The plaintext reference for run_application3: same normalization, same
/// per-slot distances, same clustering — but without any perturbation.
inline ClusteringResult plaintext_application3(const Dataset& log_a,
                                               const Dataset& log_b,
                                               std::size_t k,
                                               std::uint64_t seed) {
    if (log_a.d != log_b.d || log_a.N != log_b.N)
        throw std::invalid_argument("plaintext_application3: logs must share shape");
    const Dataset na =
        log_a.unit_normalized ? log_a : normalize_to_unit(log_a).data;
    const Dataset nb =
        log_b.unit_normalized ? log_b : normalize_to_unit(log_b).data;
    std::vector<std::vector<double>> points(na.N);
    for (std::size_t j = 0; j < na.N; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < na.d; ++i) {
            const double dlt = na.values(i, j) - nb.values(i, j);
            s += dlt * dlt;
        }
        points[j] = {std::sqrt(s)};
    }
    return kmeans(points, k, seed);
}

} // namespace rotshield
