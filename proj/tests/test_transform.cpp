#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rotshield/synthetic.hpp"
#include "rotshield/transform.hpp"

using namespace rotshield;

namespace {

Dataset random_unit_dataset(std::size_t d, std::size_t N, std::uint64_t seed) {
    Rng rng(seed);
    Dataset x(d, N);
    for (double& v : x.values.entries) v = rng.normal();
    return normalize_to_unit(x).data;
}

/// A key whose every part rotation is the identity (test hook).
PerturbationKey identity_key(std::size_t N, std::size_t n, std::size_t d) {
    PerturbationKey key = make_key(0, N, n, d, true);
    for (std::uint64_t& s : key.part_seeds) s = identity_rotation_seed;
    return key;
}

} // namespace

TEST_CASE("normalize_to_unit scales the 3-4-5 record", "[transform]") {
    Dataset x(2, 1);
    x.values(0, 0) = 3;
    x.values(1, 0) = 4;
    const NormalizeResult res = normalize_to_unit(x);
    CHECK(res.data.values(0, 0) == Catch::Approx(0.6).margin(1e-15));
    CHECK(res.data.values(1, 0) == Catch::Approx(0.8).margin(1e-15));
    CHECK(res.norms[0] == Catch::Approx(5.0).margin(1e-15));
    CHECK(res.data.unit_normalized);
}

TEST_CASE("normalize_to_unit leaves unit records unchanged", "[transform]") {
    Dataset x(2, 1);
    x.values(0, 0) = 1.0;
    const NormalizeResult res = normalize_to_unit(x);
    CHECK(res.data.values(0, 0) == 1.0);
    CHECK(res.data.values(1, 0) == 0.0);
    CHECK(res.norms[0] == 1.0);
}

TEST_CASE("normalize_to_unit is idempotent", "[transform]") {
    Rng rng(11);
    Dataset x(4, 30);
    for (double& v : x.values.entries) v = rng.uniform(0.1, 5.0);
    const Dataset once = normalize_to_unit(x).data;
    const Dataset twice = normalize_to_unit(once).data;
    CHECK(max_abs_diff(once.values, twice.values) < 1e-12);
}

TEST_CASE("normalize_to_unit names the zero-norm record", "[transform]") {
    Dataset x(2, 3);
    x.values(0, 0) = 1;
    x.values(1, 2) = 1; // record 1 stays all-zero
    CHECK_THROWS_WITH(normalize_to_unit(x),
                      Catch::Matchers::ContainsSubstring("record 1"));
}

TEST_CASE("make_partitioning splits records into balanced contiguous parts", "[transform]") {
    CHECK(make_partitioning(10, 1).boundaries == std::vector<std::size_t>{0, 10});
    CHECK(make_partitioning(10, 3).boundaries ==
          std::vector<std::size_t>{0, 4, 7, 10});
    const Partitioning p = make_partitioning(9, 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(p.part_size(i) == 3);
}

TEST_CASE("make_partitioning rejects impossible part counts", "[transform]") {
    CHECK_THROWS_AS(make_partitioning(10, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_partitioning(10, 11), std::invalid_argument);
}

TEST_CASE("partitioning part sizes differ by at most one", "[transform]") {
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t N = 1 + rng.next_u64() % 200;
        const std::size_t n = 1 + rng.next_u64() % N;
        const Partitioning p = make_partitioning(N, n);
        validate_partitioning(p);
        std::size_t lo = N, hi = 0, total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            lo = std::min(lo, p.part_size(i));
            hi = std::max(hi, p.part_size(i));
            total += p.part_size(i);
        }
        CHECK(hi - lo <= 1);
        CHECK(total == N);
    }
}

TEST_CASE("perturb with the identity hook returns the input", "[transform]") {
    const Dataset x = random_unit_dataset(3, 40, 13);
    const Dataset y = perturb(x, identity_key(40, 4, 3));
    CHECK(max_abs_diff(y.values, x.values) == 0.0);
}

TEST_CASE("perturb keeps records on the unit sphere", "[transform]") {
    const Dataset x = random_unit_dataset(5, 100, 14);
    const Dataset y = perturb(x, make_key(3, 100, 7, 5, true));
    for (std::size_t j = 0; j < y.N; ++j)
        CHECK(std::abs(record_norm(y, j) - 1.0) <= 1e-10);
}

TEST_CASE("plain rotation preserves the whole distance matrix", "[transform]") {
    const Dataset x = random_unit_dataset(4, 60, 15);
    const Dataset y = perturb(x, make_key(8, 60, 1, 4, true));
    for (std::size_t j = 0; j < x.N; ++j)
        for (std::size_t k = j + 1; k < x.N; ++k)
            CHECK(std::abs(record_distance(y, j, k) - record_distance(x, j, k)) <=
                  1e-10);
}

TEST_CASE("same-part distances survive, cross-part distances break", "[transform]") {
    Rng trial_rng(16);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = 3 + trial_rng.next_u64() % 5;
        const std::size_t N = 80 + trial_rng.next_u64() % 80;
        const std::size_t n = 2 + trial_rng.next_u64() % 5;
        const Dataset x = random_unit_dataset(d, N, 100 + trial);
        const PerturbationKey key = make_key(200 + trial, N, n, d, true);
        const Dataset y = perturb(x, key);

        double same_dev = 0.0, cross_dev = 0.0;
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = j + 1; k < N; ++k) {
                const double dev =
                    std::abs(record_distance(y, j, k) - record_distance(x, j, k));
                if (key.partitioning.part_of(j) == key.partitioning.part_of(k))
                    same_dev = std::max(same_dev, dev);
                else
                    cross_dev = std::max(cross_dev, dev);
            }
        CHECK(same_dev <= 1e-10);
        CHECK(cross_dev > 1e-3);
    }
}

TEST_CASE("the owner can invert the perturbation exactly", "[transform]") {
    Rng trial_rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = 2 + trial_rng.next_u64() % 7;
        const std::size_t N = 20 + trial_rng.next_u64() % 100;
        const std::size_t n = 1 + trial_rng.next_u64() % std::min<std::size_t>(8, N);
        const Dataset x = random_unit_dataset(d, N, 300 + trial);
        const PerturbationKey key = make_key(400 + trial, N, n, d, true);
        const Dataset y = perturb(x, key);
        const Dataset back = invert_perturbation(y, key);
        CHECK(max_abs_diff(back.values, x.values) <= 1e-10);
    }
}

TEST_CASE("perturb validates its preconditions", "[transform]") {
    Dataset raw(3, 10);
    for (std::size_t j = 0; j < 10; ++j) raw.values(0, j) = 1.0 + j;
    const PerturbationKey key = make_key(1, 10, 2, 3, true);
    CHECK_THROWS_AS(perturb(raw, key), std::invalid_argument); // not normalized

    const Dataset x = random_unit_dataset(4, 10, 18);
    CHECK_THROWS_AS(perturb(x, key), std::invalid_argument); // d mismatch

    const Dataset small = random_unit_dataset(3, 6, 19);
    CHECK_THROWS_AS(perturb(small, key), std::invalid_argument); // N mismatch
}

TEST_CASE("inner_product_block has unit self diagonal", "[transform]") {
    const Dataset x = random_unit_dataset(3, 30, 20);
    const PerturbationKey key = make_key(5, 30, 3, 3, true);
    const Dataset y = perturb(x, key);
    const BlockInnerProducts blocks = inner_product_block(y, y, key.partitioning);
    for (std::size_t j = 0; j < 30; ++j)
        CHECK(blocks.gram(j, j) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("inner_product_block with one part matches the original gram", "[transform]") {
    const Dataset x1 = random_unit_dataset(3, 25, 21);
    const Dataset x2 = random_unit_dataset(3, 25, 22);
    const PerturbationKey key = make_key(6, 25, 1, 3, true);
    const Dataset y1 = perturb(x1, key);
    const Dataset y2 = perturb(x2, key);
    const BlockInnerProducts blocks = inner_product_block(y1, y2, key.partitioning);
    for (std::size_t i = 0; i < 25; ++i)
        for (std::size_t j = 0; j < 25; ++j) {
            CHECK(std::abs(blocks.gram(i, j) - record_dot(x1, i, x2, j)) <= 1e-10);
            CHECK(blocks.distance_faithful(i, j));
        }
}

TEST_CASE("off-diagonal blocks are not inner-product faithful", "[transform]") {
    const Dataset x1 = random_unit_dataset(4, 40, 23);
    const Dataset x2 = random_unit_dataset(4, 40, 24);
    const PerturbationKey key = make_key(7, 40, 4, 4, true);
    const Dataset y1 = perturb(x1, key);
    const Dataset y2 = perturb(x2, key);
    const BlockInnerProducts blocks = inner_product_block(y1, y2, key.partitioning);

    double same_dev = 0.0, cross_dev = 0.0;
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t j = 0; j < 40; ++j) {
            const double dev =
                std::abs(blocks.gram(i, j) - record_dot(x1, i, x2, j));
            if (blocks.distance_faithful(i, j))
                same_dev = std::max(same_dev, dev);
            else
                cross_dev = std::max(cross_dev, dev);
        }
    CHECK(same_dev <= 1e-10);
    CHECK(cross_dev > 1e-3);
}

TEST_CASE("inner_product_block rejects mismatched inputs", "[transform]") {
    const Dataset a = random_unit_dataset(3, 20, 25);
    const Dataset b = random_unit_dataset(3, 21, 26);
    CHECK_THROWS_AS(inner_product_block(a, b, make_partitioning(20, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(inner_product_block(a, a, make_partitioning(21, 2)),
                    std::invalid_argument);
}

TEST_CASE("distance_from_inner matches the unit-vector formula", "[transform]") {
    CHECK(distance_from_inner(1.0) == 0.0);
    CHECK(distance_from_inner(0.0) == Catch::Approx(std::sqrt(2.0)));
    CHECK(distance_from_inner(-1.0) == Catch::Approx(2.0));
    CHECK(distance_from_inner(1.0 + 5e-10) == 0.0); // inside the clamp window
    CHECK_THROWS_AS(distance_from_inner(1.1), std::invalid_argument);
    CHECK_THROWS_AS(distance_from_inner(-1.1), std::invalid_argument);
}

TEST_CASE("distance_from_inner agrees with brute force on random unit pairs",
          "[transform]") {
    Rng rng(27);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = 2 + rng.next_u64() % 7;
        std::vector<double> a(d), b(d);
        double na = 0, nb = 0;
        for (std::size_t i = 0; i < d; ++i) {
            a[i] = rng.normal();
            b[i] = rng.normal();
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        na = std::sqrt(na);
        nb = std::sqrt(nb);
        double ip = 0, dist2 = 0;
        for (std::size_t i = 0; i < d; ++i) {
            a[i] /= na;
            b[i] /= nb;
            ip += a[i] * b[i];
        }
        for (std::size_t i = 0; i < d; ++i)
            dist2 += (a[i] - b[i]) * (a[i] - b[i]);
        CHECK(std::abs(distance_from_inner(ip) - std::sqrt(dist2)) <= 1e-9);
    }
}

TEST_CASE("corresponding_distances of a dataset with itself vanish", "[transform]") {
    const Dataset x = random_unit_dataset(3, 30, 28);
    const PerturbationKey key = make_key(9, 30, 3, 3, true);
    const Dataset y = perturb(x, key);
    for (double v : corresponding_distances(y, y, key.partitioning))
        CHECK(v <= 1e-7);
}

TEST_CASE("corresponding_distances equal the original-space distances", "[transform]") {
    const Dataset x1 = random_unit_dataset(3, 50, 29);
    const Dataset x2 = random_unit_dataset(3, 50, 30);
    const PerturbationKey key = make_key(10, 50, 4, 3, true);
    const Dataset y1 = perturb(x1, key);
    const Dataset y2 = perturb(x2, key);
    const std::vector<double> dist =
        corresponding_distances(y1, y2, key.partitioning);
    for (std::size_t j = 0; j < 50; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            const double dlt = x1.values(i, j) - x2.values(i, j);
            s += dlt * dlt;
        }
        CHECK(std::abs(dist[j] - std::sqrt(s)) <= 1e-9);
    }
}

TEST_CASE("corresponding_distances ignore which rotations were used", "[transform]") {
    const Dataset x1 = random_unit_dataset(3, 40, 31);
    const Dataset x2 = random_unit_dataset(3, 40, 32);
    PerturbationKey key = make_key(11, 40, 4, 3, true);
    const std::vector<double> base = corresponding_distances(
        perturb(x1, key), perturb(x2, key), key.partitioning);

    // Permute the part seeds: different rotations, same distances.
    std::rotate(key.part_seeds.begin(), key.part_seeds.begin() + 1,
                key.part_seeds.end());
    const std::vector<double> permuted = corresponding_distances(
        perturb(x1, key), perturb(x2, key), key.partitioning);
    for (std::size_t j = 0; j < base.size(); ++j)
        CHECK(std::abs(base[j] - permuted[j]) <= 1e-12);
}

TEST_CASE("difference_covariance is zero without displacement", "[transform]") {
    const Dataset x = random_unit_dataset(3, 25, 33);
    CHECK(difference_covariance(x, x) == 0.0);
}

TEST_CASE("difference_covariance matches the closed form for a negated attribute",
          "[transform]") {
    const Dataset x = random_unit_dataset(3, 200, 34);
    Dataset y = x;
    for (std::size_t j = 0; j < x.N; ++j) y.values(1, j) = -x.values(1, j);

    // Differences are -2 x_1j on attribute 1 and zero elsewhere, so the
    // score is Var(2 x_1) / d.
    const std::vector<double> attr = x.attribute(1);
    double mean = 0.0;
    for (double v : attr) mean += v;
    mean /= static_cast<double>(attr.size());
    double var = 0.0;
    for (double v : attr) var += (v - mean) * (v - mean);
    var /= static_cast<double>(attr.size());
    CHECK(difference_covariance(x, y) ==
          Catch::Approx(4.0 * var / 3.0).epsilon(1e-12));
}

TEST_CASE("difference_covariance ignores constant displacement", "[transform]") {
    const Dataset x = random_unit_dataset(3, 50, 35);
    Dataset y = x;
    for (double& v : y.values.entries) v += 0.25;
    CHECK(difference_covariance(x, y) == Catch::Approx(0.0).margin(1e-15));
    CHECK_THROWS_AS(difference_covariance(x, Dataset(3, 49)), std::invalid_argument);
}

TEST_CASE("part seeds derive deterministically from the master seed", "[transform]") {
    const PerturbationKey a = make_key(77, 100, 4, 3, true);
    const PerturbationKey b = make_key(77, 100, 4, 3, true);
    CHECK(a.part_seeds == b.part_seeds);
    CHECK(derive_part_seed(77, 0) == a.part_seeds[0]);
    // Distinct parts get distinct seeds (would collide only by accident).
    CHECK(a.part_seeds[0] != a.part_seeds[1]);

    PerturbationKey c = a;
    c.part_seeds.clear();
    rederive_part_seeds(c);
    CHECK(c.part_seeds == a.part_seeds);
}
