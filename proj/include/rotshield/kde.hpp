#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotshield {

/// Linear-interpolation percentile (q in [0, 100]) of an unsorted sample.
inline double percentile(std::vector<double> sample, double q) {
    if (sample.empty()) throw std::invalid_argument("percentile: empty sample");
    std::sort(sample.begin(), sample.end());
    const double pos = (q / 100.0) * static_cast<double>(sample.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sample.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sample[lo] + frac * (sample[hi] - sample[lo]);
}

/// Shifts and scales a sample to zero mean and unit (population) variance.
inline std::vector<double> standardize_sample(const std::vector<double>& sample) {
    if (sample.size() < 2)
        throw std::invalid_argument("standardize_sample: need >= 2 points");
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= static_cast<double>(sample.size());
    double var = 0.0;
    for (double v : sample) var += (v - mean) * (v - mean);
    var /= static_cast<double>(sample.size());
    const double sd = std::sqrt(var);
    if (!(sd > 1e-300))
        throw std::runtime_error("standardize_sample: zero-spread sample");
    std::vector<double> out(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i)
        out[i] = (sample[i] - mean) / sd;
    return out;
}

/// Gaussian kernel density estimate of a scalar sample. The bandwidth is
/// fixed at fit time by Silverman's rule; density() averages one Gaussian
/// bump per sample point.
struct KdeModel {
    std::vector<double> sample;
    double bandwidth = 0.0;
    double sample_min = 0.0;
    double sample_max = 0.0;

    double density(double z) const {
        const double inv_h = 1.0 / bandwidth;
        double s = 0.0;
        for (double x : sample) {
            const double u = (z - x) * inv_h;
            s += std::exp(-0.5 * u * u);
        }
        constexpr double inv_sqrt_2pi = 0.3989422804014327;
        return s * inv_sqrt_2pi * inv_h / static_cast<double>(sample.size());
    }
};

/// Fits a Gaussian KDE with Silverman's bandwidth
/// h = 0.9 * min(sd, IQR / 1.34) * m^(-1/5), where sd uses the m-1 divisor.
/// Throws std::invalid_argument for samples shorter than 8 and
/// std::runtime_error when the rule yields a non-positive bandwidth
/// (degenerate spread).
inline KdeModel kde_fit(const std::vector<double>& sample) {
    const std::size_t m = sample.size();
    if (m < 8)
        throw std::invalid_argument("kde_fit: need at least 8 points, got " +
                                    std::to_string(m));
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double v : sample) var += (v - mean) * (v - mean);
    var /= static_cast<double>(m - 1);
    const double sd = std::sqrt(var);
    const double iqr = percentile(sample, 75.0) - percentile(sample, 25.0);
    const double spread = std::min(sd, iqr / 1.34);
    const double h =
        0.9 * spread * std::pow(static_cast<double>(m), -0.2);
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::runtime_error("kde_fit: degenerate sample (zero spread)");

    KdeModel model;
    model.sample = sample;
    model.bandwidth = h;
    auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
    model.sample_min = *lo;
    model.sample_max = *hi;
    return model;
}

/// Integration domain and resolution for density comparisons.
struct DivergenceConfig {
    double grid_lo = 0.0;
    double grid_hi = 0.0;
    std::size_t grid_points = 512;
};

/// Grid spanning both samples' ranges +- 4 bandwidths — wide enough that the
/// Gaussian kernels' unaccounted tail mass is negligible.
inline DivergenceConfig default_divergence_config(const KdeModel& f,
                                                  const KdeModel& g,
                                                  std::size_t points = 512) {
    DivergenceConfig cfg;
    cfg.grid_lo = std::min(f.sample_min - 4.0 * f.bandwidth,
                           g.sample_min - 4.0 * g.bandwidth);
    cfg.grid_hi = std::max(f.sample_max + 4.0 * f.bandwidth,
                           g.sample_max + 4.0 * g.bandwidth);
    cfg.grid_points = points;
    return cfg;
}

/// Total-variation distance between two fitted densities: the trapezoidal
/// estimate of (1/2) * integral of |f - g| over the configured grid. 0 for
/// identical densities, 1 for disjoint supports. Throws when the grid fails
/// to cover either sample's range +- 4 bandwidths.
inline double density_divergence(const KdeModel& f, const KdeModel& g,
                                 const DivergenceConfig& cfg) {
    if (!(cfg.grid_lo < cfg.grid_hi))
        throw std::invalid_argument("density_divergence: grid_lo must be < grid_hi");
    if (cfg.grid_points < 64)
        throw std::invalid_argument("density_divergence: need >= 64 grid points");
    const double need_lo = std::min(f.sample_min - 4.0 * f.bandwidth,
                                    g.sample_min - 4.0 * g.bandwidth);
    const double need_hi = std::max(f.sample_max + 4.0 * f.bandwidth,
                                    g.sample_max + 4.0 * g.bandwidth);
    constexpr double slack = 1e-9;
    if (cfg.grid_lo > need_lo + slack || cfg.grid_hi < need_hi - slack)
        throw std::invalid_argument(
            "density_divergence: grid [" + std::to_string(cfg.grid_lo) + ", " +
            std::to_string(cfg.grid_hi) + "] does not cover both supports [" +
            std::to_string(need_lo) + ", " + std::to_string(need_hi) + "]");

    const std::size_t n = cfg.grid_points;
    const double step = (cfg.grid_hi - cfg.grid_lo) / static_cast<double>(n - 1);
    double acc = 0.0;
    double prev = std::abs(f.density(cfg.grid_lo) - g.density(cfg.grid_lo));
    for (std::size_t i = 1; i < n; ++i) {
        const double z = cfg.grid_lo + step * static_cast<double>(i);
        const double cur = std::abs(f.density(z) - g.density(z));
        acc += 0.5 * (prev + cur) * step;
        prev = cur;
    }
    return 0.5 * acc;
}

} // namespace rotshield
