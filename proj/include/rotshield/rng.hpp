#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace rotshield {

/// splitmix64 mixing function (Steele/Lea/Flood). Used wherever a derived
/// seed is needed; fixed here so derived seeds are identical on every
/// platform and in every future version.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic random source. std::mt19937_64 is fully specified by the
/// standard, and every variate below is produced by an explicit mapping from
/// its raw 64-bit output (never std::*_distribution, whose algorithms are
/// implementation-defined), so streams reproduce bit-identically everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via the Marsaglia polar method (second deviate cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    /// Laplace(mu, b) via inverse CDF. The uniform is drawn from (0, 1) so the
    /// logarithm argument stays strictly positive.
    double laplace(double mu, double b) {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        const double c = u - 0.5;
        return mu - b * (c < 0.0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(c));
    }

    /// Fisher-Yates permutation of {0, ..., n-1}. The index draw uses a plain
    /// modulo; the bias is < 2^-50 for any n this library handles and the
    /// mapping stays platform-independent.
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        std::iota(p.begin(), p.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(engine_() % i);
            std::swap(p[i - 1], p[j]);
        }
        return p;
    }

    /// k distinct indices in [0, n), in the order the shuffle produced them.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        if (k > n) throw std::invalid_argument("Rng::sample_indices: k > n");
        std::vector<std::size_t> p = permutation(n);
        p.resize(k);
        return p;
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace rotshield
