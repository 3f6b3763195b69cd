#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "rotshield/evaluate.hpp"
#include "rotshield/synthetic.hpp"
#include "rotshield/transform.hpp"
#include "support.hpp"

using namespace rotshield;

namespace {

std::vector<std::vector<double>> records_as_points(const Dataset& x) {
    std::vector<std::vector<double>> pts(x.N, std::vector<double>(x.d));
    for (std::size_t j = 0; j < x.N; ++j)
        for (std::size_t i = 0; i < x.d; ++i) pts[j][i] = x.values(i, j);
    return pts;
}

ClusteringResult labels_as_clustering(const std::vector<std::size_t>& labels,
                                      std::size_t k) {
    ClusteringResult r;
    r.k = k;
    r.assignments = labels;
    return r;
}

} // namespace

TEST_CASE("kmeans recovers well-separated angular blobs", "[evaluate]") {
    for (std::uint64_t seed : {1234ULL, 1000ULL, 1001ULL}) {
        std::vector<std::size_t> labels;
        const Dataset x = testsupport::blob_dataset(3, 600, 3, seed, &labels);
        const Dataset xn = normalize_to_unit(x).data;
        const ClusteringResult km = kmeans(records_as_points(xn), 3, 42);
        CHECK(cluster_agreement(km, labels_as_clustering(labels, 3)) == 1.0);
    }
}

TEST_CASE("kmeans with as many clusters as points has zero inertia", "[evaluate]") {
    Rng rng(3);
    std::vector<std::vector<double>> pts(12, std::vector<double>(2));
    for (auto& p : pts)
        for (double& v : p) v = rng.normal();
    const ClusteringResult km = kmeans(pts, 12, 1);
    CHECK(km.inertia == 0.0);
    std::set<std::size_t> used(km.assignments.begin(), km.assignments.end());
    CHECK(used.size() == 12);
}

TEST_CASE("kmeans never loses to a random assignment", "[evaluate]") {
    Rng rng(11);
    std::vector<std::vector<double>> pts(100, std::vector<double>(2));
    for (auto& p : pts)
        for (double& v : p) v = rng.uniform(-2.0, 2.0);
    const std::size_t k = 5;
    const ClusteringResult km = kmeans(pts, k, 4);

    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::size_t> labels(pts.size());
        for (auto& l : labels) l = rng.next_u64() % k;
        std::vector<std::vector<double>> cent(k, std::vector<double>(2, 0.0));
        std::vector<std::size_t> count(k, 0);
        for (std::size_t j = 0; j < pts.size(); ++j) {
            ++count[labels[j]];
            for (std::size_t i = 0; i < 2; ++i) cent[labels[j]][i] += pts[j][i];
        }
        for (std::size_t c = 0; c < k; ++c)
            if (count[c] > 0)
                for (double& v : cent[c]) v /= static_cast<double>(count[c]);
        double inertia = 0.0;
        for (std::size_t j = 0; j < pts.size(); ++j)
            for (std::size_t i = 0; i < 2; ++i) {
                const double dlt = pts[j][i] - cent[labels[j]][i];
                inertia += dlt * dlt;
            }
        CHECK(km.inertia <= inertia + 1e-12);
    }
}

TEST_CASE("kmeans validates k", "[evaluate]") {
    std::vector<std::vector<double>> pts(5, std::vector<double>(1, 0.5));
    CHECK_THROWS_AS(kmeans(pts, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(kmeans(pts, 6, 1), std::invalid_argument);
}

TEST_CASE("cluster_agreement is invariant to label renaming", "[evaluate]") {
    const std::vector<std::size_t> a = {0, 0, 1, 1, 2, 2, 0, 1, 2};
    std::vector<std::size_t> renamed = a;
    for (std::size_t& l : renamed) l = (l + 2) % 3; // 0->2, 1->0, 2->1

    const ClusteringResult ca = labels_as_clustering(a, 3);
    CHECK(cluster_agreement(ca, ca) == 1.0);
    CHECK(cluster_agreement(ca, labels_as_clustering(renamed, 3)) == 1.0);
}

TEST_CASE("cluster_agreement of a constant vs a balanced split is one half",
          "[evaluate]") {
    const std::vector<std::size_t> all_zero(10, 0);
    std::vector<std::size_t> balanced(10);
    for (std::size_t j = 0; j < 10; ++j) balanced[j] = j % 2;
    CHECK(cluster_agreement(labels_as_clustering(all_zero, 2),
                            labels_as_clustering(balanced, 2)) == 0.5);
}

TEST_CASE("cluster_agreement validates its inputs", "[evaluate]") {
    const ClusteringResult a = labels_as_clustering({0, 1, 0}, 2);
    CHECK_THROWS_AS(cluster_agreement(a, labels_as_clustering({0, 1}, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(cluster_agreement(a, labels_as_clustering({0, 1, 2}, 3)),
                    std::invalid_argument);
}

TEST_CASE("run_experiment1 at fraction one is a perfect match", "[evaluate]") {
    const ExtrapolationReport rep = run_experiment1(2000, 1.0, 3);
    CHECK(rep.divergence == 0.0);
    CHECK(rep.similarity == 1.0);
    CHECK(rep.N == 2000);
    CHECK(rep.fraction == 1.0);
    CHECK(rep.seed == 3);
}

TEST_CASE("run_experiment1 similarity grows with the sampled fraction",
          "[evaluate]") {
    const std::vector<double> fractions = {0.05, 0.1, 0.2, 0.5};
    std::vector<double> means;
    for (double f : fractions) {
        double mean = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const ExtrapolationReport rep = run_experiment1(4000, f, seed);
            CHECK(rep.similarity > 0.0);
            CHECK(rep.similarity <= 1.0);
            mean += rep.similarity;
        }
        means.push_back(mean / 10.0);
    }
    // A small known sample already extrapolates the density well, and more
    // knowledge helps monotonically.
    CHECK(means.front() > 0.9);
    for (std::size_t i = 1; i < means.size(); ++i) CHECK(means[i] > means[i - 1]);
}

TEST_CASE("run_experiment1 validates its arguments", "[evaluate]") {
    CHECK_THROWS_AS(run_experiment1(999, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(run_experiment1(2000, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(run_experiment1(2000, 1.2, 0), std::invalid_argument);
}

TEST_CASE("a sweep cell equals the hand-assembled attack pipeline", "[evaluate]") {
    const Dataset data = synthetic_dataset(3, 1500, 99);
    const auto cells = run_figure1_sweep(data, {2}, {0.1}, {5});
    REQUIRE(cells.size() == 1);

    const Dataset xn = normalize_to_unit(data).data;
    const auto bounds = attribute_bounds(xn);
    const PerturbationKey key =
        make_key(detail::sweep_master_seed(5, 2), xn.N, 2, xn.d, true);
    const Dataset released = perturb(xn, key);

    std::vector<std::size_t> idx = Rng(detail::sweep_known_seed(5)).permutation(xn.N);
    idx.resize(static_cast<std::size_t>(std::llround(0.1 * 1500.0)));

    DivergenceConfig cfg;
    cfg.grid_lo = -12.0;
    cfg.grid_hi = 12.0;
    cfg.grid_points = 512;
    const AttackReport rep =
        ak_ica_attack(released, subset_records(xn, idx), idx, bounds, cfg);

    CHECK(cells[0].n == 2);
    CHECK(cells[0].fraction == 0.1);
    CHECK(cells[0].seed == 5);
    CHECK(cells[0].converged == rep.converged);
    CHECK(cells[0].accuracy == reconstruction_accuracy(rep.reconstructed, xn));
}

TEST_CASE("run_figure1_sweep is deterministic and thread-count independent",
          "[evaluate]") {
    const Dataset data = synthetic_dataset(3, 1200, 7);
    const std::vector<std::size_t> ns = {1, 2};
    const std::vector<double> fractions = {0.1};
    const std::vector<std::uint64_t> seeds = {0, 1};

    const auto a = run_figure1_sweep(data, ns, fractions, seeds, 1);
    const auto b = run_figure1_sweep(data, ns, fractions, seeds, 1);
    const auto c = run_figure1_sweep(data, ns, fractions, seeds, 2);

    REQUIRE(a.size() == 4);
    // n-major, then fraction, then seed
    CHECK(a[0].n == 1);
    CHECK(a[0].seed == 0);
    CHECK(a[1].n == 1);
    CHECK(a[1].seed == 1);
    CHECK(a[2].n == 2);
    CHECK(a[2].seed == 0);
    CHECK(a[3].n == 2);
    CHECK(a[3].seed == 1);

    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].accuracy == b[i].accuracy);
        CHECK(a[i].accuracy == c[i].accuracy);
        CHECK(a[i].converged == c[i].converged);
    }
}

TEST_CASE("run_figure1_sweep validates its grid", "[evaluate]") {
    const Dataset data = synthetic_dataset(2, 1000, 1);
    CHECK_THROWS_AS(run_figure1_sweep(data, {}, {0.1}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(run_figure1_sweep(data, {1}, {}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(run_figure1_sweep(data, {1}, {0.1}, {}), std::invalid_argument);
    CHECK_THROWS_AS(run_figure1_sweep(data, {1}, {0.0}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(run_figure1_sweep(data, {1}, {1.0}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(run_figure1_sweep(data, {0}, {0.1}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(run_figure1_sweep(data, {1001}, {0.1}, {0}),
                    std::invalid_argument);
}

TEST_CASE("summarize_sweep aggregates converged cells per (n, fraction)",
          "[evaluate]") {
    std::vector<SweepCell> cells = {
        {1, 0.1, 0, 0.5, true},  {1, 0.1, 1, 0.7, true}, {1, 0.1, 2, 0.9, false},
        {2, 0.1, 0, 0.2, true},  {2, 0.2, 0, 0.0, false},
    };
    const auto rows = summarize_sweep(cells);
    REQUIRE(rows.size() == 3);

    CHECK(rows[0].n == 1);
    CHECK(rows[0].fraction == 0.1);
    CHECK(rows[0].cells == 3);
    CHECK(rows[0].non_converged == 1);
    CHECK(rows[0].mean_accuracy == Catch::Approx(0.6));
    CHECK(rows[0].stddev == Catch::Approx(0.1));

    CHECK(rows[1].n == 2);
    CHECK(rows[1].cells == 1);
    CHECK(rows[1].non_converged == 0);
    CHECK(rows[1].mean_accuracy == Catch::Approx(0.2));
    CHECK(rows[1].stddev == 0.0);

    // A row with no converged cells keeps zeroed statistics.
    CHECK(rows[2].fraction == 0.2);
    CHECK(rows[2].non_converged == 1);
    CHECK(rows[2].mean_accuracy == 0.0);
}

TEST_CASE("difference clustering on perturbed logs matches the plaintext result",
          "[evaluate]") {
    const testsupport::AccessLogPair logs = testsupport::access_log_pair(3, 400, 12, 77);
    const ClusteringResult plain =
        plaintext_application3(logs.log_a, logs.log_b, 2, 5);

    const std::set<std::size_t> anomalous(logs.anomalous.begin(),
                                          logs.anomalous.end());
    for (std::size_t n : {1, 2, 4, 8}) {
        const PerturbationKey key = make_key(99, 400, n, 3, true);
        const ClusteringResult priv =
            run_application3(logs.log_a, logs.log_b, key, 2, 5);
        CHECK(cluster_agreement(priv, plain) == 1.0);

        // The smaller cluster is exactly the set of anomalous slots.
        std::vector<std::size_t> members[2];
        for (std::size_t j = 0; j < priv.assignments.size(); ++j)
            members[priv.assignments[j]].push_back(j);
        const auto& small =
            members[0].size() < members[1].size() ? members[0] : members[1];
        const std::set<std::size_t> found(small.begin(), small.end());
        CHECK(found == anomalous);
    }
}

TEST_CASE("difference clustering does not depend on the rotation key",
          "[evaluate]") {
    const testsupport::AccessLogPair logs = testsupport::access_log_pair(3, 400, 12, 78);
    const ClusteringResult a =
        run_application3(logs.log_a, logs.log_b, make_key(99, 400, 4, 3, true), 2, 5);
    const ClusteringResult b =
        run_application3(logs.log_a, logs.log_b, make_key(1234, 400, 4, 3, true), 2, 5);
    CHECK(cluster_agreement(a, b) == 1.0);
}

TEST_CASE("identical logs leave no distance signal to cluster", "[evaluate]") {
    const testsupport::AccessLogPair logs = testsupport::access_log_pair(3, 100, 5, 79);
    const PerturbationKey key = make_key(7, 100, 2, 3, true);

    // Corresponding records are equal, so their distances vanish to rounding
    // (sqrt amplifies roundoff near zero: |dist| <= ~sqrt(eps)).
    const Dataset na = normalize_to_unit(logs.log_a).data;
    const Dataset released = perturb(na, key);
    for (double dist :
         corresponding_distances(released, released, key.partitioning))
        CHECK(dist <= 1e-7);

    // Whatever labels k-means picks for that residual noise, every centroid
    // sits at (numerically) zero distance.
    const ClusteringResult r =
        run_application3(logs.log_a, logs.log_a, key, 2, 5);
    CHECK(r.inertia <= 1e-12);
    for (const auto& c : r.centroids) CHECK(std::abs(c[0]) <= 1e-7);
}

TEST_CASE("run_application3 rejects mismatched logs", "[evaluate]") {
    const Dataset a(3, 10), b(3, 11);
    CHECK_THROWS_AS(run_application3(a, b, make_key(1, 10, 1, 3, true), 2, 1),
                    std::invalid_argument);
}

TEST_CASE("cluster_corresponding works from released data and public metadata",
          "[evaluate]") {
    const testsupport::AccessLogPair logs = testsupport::access_log_pair(3, 200, 8, 80);
    const Dataset na = normalize_to_unit(logs.log_a).data;
    const Dataset nb = normalize_to_unit(logs.log_b).data;
    const PerturbationKey key = make_key(21, 200, 4, 3, true);
    const ClusteringResult via_released = cluster_corresponding(
        perturb(na, key), perturb(nb, key), key.partitioning, 2, 9);
    const ClusteringResult direct = run_application3(logs.log_a, logs.log_b, key, 2, 9);
    CHECK(via_released.assignments == direct.assignments);
}
