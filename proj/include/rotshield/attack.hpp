#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotshield/assignment.hpp"
#include "rotshield/dataset.hpp"
#include "rotshield/fastica.hpp"
#include "rotshield/kde.hpp"
#include "rotshield/whiten.hpp"

namespace rotshield {

/// How estimated components map onto original attributes:
/// attribute j is reconstructed as signs[j] * scales[j] * component[permutation[j]].
struct Alignment {
    std::vector<std::size_t> permutation; // attribute index -> component index
    std::vector<double> signs;            // +1 / -1 per attribute
    std::vector<double> scales;           // positive, 1 until amplitude recovery
};

/// Everything the attack produces. `accuracy` is only present when an
/// evaluator holding the ground truth fills it in; the attacker alone cannot
/// compute it.
struct AttackReport {
    Dataset reconstructed;
    Alignment alignment;
    std::optional<double> accuracy;              // in [0, 1] when present
    std::vector<double> per_component_divergence; // one per attribute
    double known_fraction = 0.0;
    bool converged = false;
    std::size_t iterations_used = 0;
};

/// Pearson correlation of two equal-length samples; 0 when either side has
/// (near-)zero variance.
inline double pearson_correlation(const std::vector<double>& a,
                                  const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("pearson_correlation: need two equal samples of >= 2 points");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    const double denom = std::sqrt(saa * sbb);
    if (!(denom > 1e-300)) return 0.0;
    return sab / denom;
}

/// Applies an alignment: row j of the result is
/// signs[j] * scales[j] * components[permutation[j]].
inline Dataset apply_alignment(const Dataset& components, const Alignment& al) {
    const std::size_t d = components.d;
    if (al.permutation.size() != d || al.signs.size() != d || al.scales.size() != d)
        throw std::invalid_argument("apply_alignment: alignment size mismatch");
    Dataset out(d, components.N);
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t src = al.permutation[j];
        if (src >= d)
            throw std::invalid_argument("apply_alignment: permutation entry out of range");
        const double f = al.signs[j] * al.scales[j];
        for (std::size_t t = 0; t < components.N; ++t)
            out.values(j, t) = f * components.values(src, t);
    }
    return out;
}

/// Density-based component alignment: the permutation is the bijection
/// minimizing the summed KDE divergence between each (standardized)
/// whole-data component and each (standardized) known original attribute,
/// solved exactly as an assignment problem; the sign per component is
/// whichever of {+, -} gives the smaller divergence. Scales stay 1 —
/// amplitude is recovered later from known bounds.
///
/// This matching sees only the component densities, so it can tell apart
/// attributes with distinct distribution shapes; identically-distributed
/// attribute pairs (or the sign of a symmetric density) carry no density
/// signal, which is exactly the gap align_by_correlation closes inside the
/// full attack.
inline Alignment align_components(const IcaResult& whole,
                                  const Dataset& known_original,
                                  const IcaResult& known_transformed,
                                  const DivergenceConfig& cfg) {
    const std::size_t d = whole.components.d;
    if (known_transformed.components.d != d)
        throw std::invalid_argument(
            "align_components: component counts differ (" + std::to_string(d) +
            " vs " + std::to_string(known_transformed.components.d) + ")");
    if (known_original.d != d)
        throw std::invalid_argument(
            "align_components: known original has " +
            std::to_string(known_original.d) + " attributes, expected " +
            std::to_string(d));

    std::vector<KdeModel> comp_pos(d), comp_neg(d), attr(d);
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> s = standardize_sample(whole.components.attribute(i));
        comp_pos[i] = kde_fit(s);
        for (double& v : s) v = -v;
        comp_neg[i] = kde_fit(s);
        attr[i] = kde_fit(standardize_sample(known_original.attribute(i)));
    }

    Matrix cost(d, d);
    Matrix sign_choice(d, d); // +1 when the positive orientation matched better
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double pos = density_divergence(comp_pos[i], attr[j], cfg);
            const double neg = density_divergence(comp_neg[i], attr[j], cfg);
            cost(i, j) = std::min(pos, neg);
            sign_choice(i, j) = (pos <= neg) ? 1.0 : -1.0;
        }
    }

    const std::vector<std::size_t> comp_to_attr = min_cost_assignment(cost);
    Alignment al;
    al.permutation.assign(d, 0);
    al.signs.assign(d, 1.0);
    al.scales.assign(d, 1.0);
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t j = comp_to_attr[i];
        al.permutation[j] = i;
        al.signs[j] = sign_choice(i, j);
    }
    return al;
}

/// Correlation-based alignment over linked records: component i restricted
/// to `indices` is compared against reference attribute j (record t of the
/// reference corresponds to record indices[t] of the components). The
/// permutation maximizes total |correlation| (exact assignment on
/// 1 - |corr|) and each sign is the sign of the matched correlation.
/// This is the attacker's strongest alignment: the known portion arrives as
/// (original record, transformed record, index) triples, and record linkage
/// disambiguates components that identical densities cannot.
inline Alignment align_by_correlation(const Dataset& components,
                                      const Dataset& reference,
                                      const std::vector<std::size_t>& indices) {
    const std::size_t d = components.d;
    if (reference.d != d)
        throw std::invalid_argument("align_by_correlation: attribute counts differ");
    if (indices.size() != reference.N)
        throw std::invalid_argument(
            "align_by_correlation: reference has " + std::to_string(reference.N) +
            " records but " + std::to_string(indices.size()) + " indices given");
    if (indices.size() < 2)
        throw std::invalid_argument("align_by_correlation: need >= 2 linked records");

    std::vector<std::vector<double>> comp_at(d, std::vector<double>(indices.size()));
    for (std::size_t t = 0; t < indices.size(); ++t) {
        const std::size_t rec = indices[t];
        if (rec >= components.N)
            throw std::invalid_argument("align_by_correlation: index " +
                                        std::to_string(rec) + " out of range");
        for (std::size_t i = 0; i < d; ++i)
            comp_at[i][t] = components.values(i, rec);
    }

    Matrix cost(d, d);
    Matrix corr(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double r = pearson_correlation(comp_at[i], reference.attribute(j));
            corr(i, j) = r;
            cost(i, j) = 1.0 - std::abs(r);
        }
    }

    const std::vector<std::size_t> comp_to_attr = min_cost_assignment(cost);
    Alignment al;
    al.permutation.assign(d, 0);
    al.signs.assign(d, 1.0);
    al.scales.assign(d, 1.0);
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t j = comp_to_attr[i];
        al.permutation[j] = i;
        al.signs[j] = (corr(i, j) < 0.0) ? -1.0 : 1.0;
    }
    return al;
}

/// Affinely maps each attribute so its sample min/max land on the given
/// bounds. Throws for a (near-)constant attribute, which carries no scale
/// information.
inline Dataset rescale_to_bounds(
    const Dataset& x_hat,
    const std::vector<std::pair<double, double>>& bounds) {
    if (bounds.size() != x_hat.d)
        throw std::invalid_argument("rescale_to_bounds: need one (min, max) per attribute");
    Dataset out = x_hat;
    for (std::size_t i = 0; i < x_hat.d; ++i) {
        const auto [blo, bhi] = bounds[i];
        if (!(bhi > blo))
            throw std::invalid_argument(
                "rescale_to_bounds: bounds for attribute " + std::to_string(i) +
                " must satisfy max > min");
        double lo = x_hat.values(i, 0), hi = lo;
        for (std::size_t j = 1; j < x_hat.N; ++j) {
            lo = std::min(lo, x_hat.values(i, j));
            hi = std::max(hi, x_hat.values(i, j));
        }
        if (!(hi - lo > 1e-12))
            throw std::runtime_error(
                "rescale_to_bounds: attribute " + std::to_string(i) +
                " is constant; cannot recover its scale");
        const double f = (bhi - blo) / (hi - lo);
        for (std::size_t j = 0; j < x_hat.N; ++j)
            out.values(i, j) = blo + (x_hat.values(i, j) - lo) * f;
    }
    out.unit_normalized = false;
    return out;
}

/// 1 - ||x_hat - x||_F / ||x||_F, clamped to [0, 1].
inline double reconstruction_accuracy(const Dataset& x_hat, const Dataset& x) {
    if (x_hat.d != x.d || x_hat.N != x.N)
        throw std::invalid_argument(
            "reconstruction_accuracy: shapes differ (" +
            shape_string(x_hat.values) + " vs " + shape_string(x.values) + ")");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.values.entries.size(); ++i) {
        const double e = x_hat.values.entries[i] - x.values.entries[i];
        num += e * e;
        den += x.values.entries[i] * x.values.entries[i];
    }
    if (!(den > 0.0))
        throw std::invalid_argument("reconstruction_accuracy: ground truth has zero norm");
    const double acc = 1.0 - std::sqrt(num) / std::sqrt(den);
    return std::min(1.0, std::max(0.0, acc));
}

/// The full reconstruction attack against released (rotated) data, given a
/// known fraction of original records with their indices and the
/// per-attribute bounds of the original data.
///
/// Pipeline: FastICA on the released data; permutation/sign recovery by
/// correlation against the known records over their indices (the linkage the
/// attacker holds); amplitude recovery by rescaling each attribute to the
/// known bounds; finally the known originals are copied verbatim into their
/// positions — the attacker already holds them exactly.
///
/// The report carries one KDE divergence per attribute between the aligned
/// component and the known sample of that attribute (both standardized):
/// small values mean the recovered component's distribution matches what the
/// attacker knows of the attribute. `cfg` sets the divergence grid
/// resolution and a minimum domain; the domain is widened as needed to cover
/// the actual samples.
///
/// ICA non-convergence is recorded in the report, not thrown. `accuracy`
/// stays empty — an evaluator with ground truth fills it.
inline AttackReport ak_ica_attack(
    const Dataset& released, const Dataset& known_original,
    const std::vector<std::size_t>& known_indices,
    const std::vector<std::pair<double, double>>& bounds,
    const DivergenceConfig& cfg) {
    const std::size_t d = released.d, N = released.N;
    if (known_original.d != d)
        throw std::invalid_argument("ak_ica_attack: known records have " +
                                    std::to_string(known_original.d) +
                                    " attributes, released data has " +
                                    std::to_string(d));
    if (known_indices.size() != known_original.N)
        throw std::invalid_argument(
            "ak_ica_attack: known records and indices disagree (" +
            std::to_string(known_original.N) + " vs " +
            std::to_string(known_indices.size()) + ")");
    if (known_indices.empty() || known_indices.size() >= N)
        throw std::invalid_argument(
            "ak_ica_attack: known fraction must lie strictly inside (0, 1)");
    {
        std::vector<bool> seen(N, false);
        for (std::size_t idx : known_indices) {
            if (idx >= N)
                throw std::invalid_argument("ak_ica_attack: known index " +
                                            std::to_string(idx) + " out of range");
            if (seen[idx])
                throw std::invalid_argument("ak_ica_attack: duplicate known index " +
                                            std::to_string(idx));
            seen[idx] = true;
        }
    }
    if (bounds.size() != d)
        throw std::invalid_argument("ak_ica_attack: need one (min, max) bound per attribute");

    AttackReport report;
    report.known_fraction =
        static_cast<double>(known_indices.size()) / static_cast<double>(N);

    const IcaResult ica = fast_ica(released);
    report.converged = ica.converged;
    report.iterations_used = ica.iterations_used;

    // Standardized copies of the component rows (unit variance is already
    // guaranteed by ICA; this also removes any residual mean).
    Dataset comps(d, N);
    for (std::size_t i = 0; i < d; ++i) {
        const std::vector<double> s = standardize_sample(ica.components.attribute(i));
        for (std::size_t t = 0; t < N; ++t) comps.values(i, t) = s[t];
    }

    report.alignment = align_by_correlation(comps, known_original, known_indices);

    Dataset estimate = apply_alignment(comps, report.alignment);
    estimate = rescale_to_bounds(estimate, bounds);

    // The attacker holds the known records; the reconstruction uses them as-is.
    for (std::size_t t = 0; t < known_indices.size(); ++t)
        for (std::size_t i = 0; i < d; ++i)
            estimate.values(i, known_indices[t]) = known_original.values(i, t);

    estimate.attribute_names = released.attribute_names;
    report.reconstructed = std::move(estimate);

    // Distribution-level similarity per attribute, for the report.
    report.per_component_divergence.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t src = report.alignment.permutation[j];
        std::vector<double> comp = comps.attribute(src);
        if (report.alignment.signs[j] < 0.0)
            for (double& v : comp) v = -v;
        const KdeModel kf = kde_fit(comp);
        const KdeModel kg = kde_fit(standardize_sample(known_original.attribute(j)));
        DivergenceConfig wide = default_divergence_config(kf, kg, cfg.grid_points);
        wide.grid_lo = std::min(wide.grid_lo, cfg.grid_lo);
        wide.grid_hi = std::max(wide.grid_hi, cfg.grid_hi);
        report.per_component_divergence[j] = density_divergence(kf, kg, wide);
    }

    return report;
}

} // namespace rotshield
