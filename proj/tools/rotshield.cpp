// rotshield — rotation-based data perturbation, the AK-ICA reconstruction
// attack against it, and the evaluation harness around both.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rotshield/rotshield.hpp"

namespace {

using namespace rotshield;

/// Flag misuse detected after CLI11 parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw UsageError(what + ": '" + text + "' is not an unsigned integer");
    return v;
}

/// Seed resolution: explicit flag wins, then ROTSHIELD_SEED, then the
/// documented fallback. Keeps every command deterministic by default while
/// letting CI vary all seeds through one env var.
std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t flag_value,
                           std::uint64_t fallback) {
    if (opt != nullptr && opt->count() > 0) return flag_value;
    if (const char* env = std::getenv("ROTSHIELD_SEED"))
        return parse_u64(env, "ROTSHIELD_SEED");
    return fallback;
}

std::vector<std::size_t> read_indices_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open())
        throw std::runtime_error("cannot open indices file '" + path + "'");
    std::vector<std::size_t> indices;
    std::string tok;
    while (in >> tok) {
        std::size_t v = 0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            throw std::runtime_error(path + ": entry " +
                                     std::to_string(indices.size() + 1) +
                                     " ('" + tok + "') is not a record index");
        indices.push_back(v);
    }
    if (indices.empty())
        throw std::runtime_error(path + ": no indices found");
    return indices;
}

/// Bounds file: CSV with one row per attribute and columns min,max.
std::vector<std::pair<double, double>> read_bounds_file(const std::string& path) {
    const Dataset table = read_csv(path);
    if (table.d != 2)
        throw std::runtime_error(path + ": expected two columns (min,max), got " +
                                 std::to_string(table.d));
    std::vector<std::pair<double, double>> bounds(table.N);
    for (std::size_t i = 0; i < table.N; ++i)
        bounds[i] = {table.values(0, i), table.values(1, i)};
    return bounds;
}

// ---------------------------------------------------------------- perturb

struct PerturbConfig {
    std::string input, out, key, meta;
    std::size_t n = 1;
    std::uint64_t seed = 0;
    bool force = false;
    const CLI::Option* seed_opt = nullptr;
};

int cmd_perturb(const PerturbConfig& cfg) {
    if (!cfg.force && (cfg.key == cfg.out || (!cfg.meta.empty() && cfg.key == cfg.meta)))
        throw UsageError(
            "refusing to write the secret key over a released file (" + cfg.key +
            "); pass --force to override");

    const Dataset raw = read_csv(cfg.input);
    const std::uint64_t seed = resolve_seed(cfg.seed_opt, cfg.seed, 1);

    const Dataset normalized = normalize_to_unit(raw).data;
    const PerturbationKey key = make_key(seed, raw.N, cfg.n, raw.d, true);
    const Dataset released = perturb(normalized, key);

    write_csv(cfg.out, released);
    save_key(cfg.key, key);
    if (!cfg.meta.empty()) save_public_metadata(cfg.meta, key);

    std::cout << "records: " << raw.N << ", attributes: " << raw.d
              << ", parts: " << cfg.n << "\n";
    std::cout << "part sizes:";
    for (std::size_t i = 0; i < key.partitioning.num_parts; ++i)
        std::cout << ' ' << key.partitioning.part_size(i);
    std::cout << "\n";
    std::cout << "difference covariance: "
              << format_double(difference_covariance(normalized, released)) << "\n";
    std::cout << "wrote released data to " << cfg.out << "\n";
    if (!cfg.meta.empty())
        std::cout << "wrote public metadata to " << cfg.meta << "\n";
    std::cout << "wrote secret key to " << cfg.key << "\n";
    std::cerr << "warning: " << cfg.key
              << " holds the master seed; never distribute it with the "
                 "released data\n";
    return 0;
}

// ----------------------------------------------------------------- attack

struct AttackConfig {
    std::string released, truth, known, indices, bounds, out, report;
    double fraction = 0.1;
    std::uint64_t seed = 0;
    const CLI::Option* seed_opt = nullptr;
};

int cmd_attack(const AttackConfig& cfg) {
    const bool via_truth = !cfg.truth.empty();
    const bool via_known = !cfg.known.empty() || !cfg.indices.empty();
    if (via_truth == via_known)
        throw UsageError(
            "pass either --truth with --fraction, or --known with --indices");
    if (via_known && (cfg.known.empty() || cfg.indices.empty()))
        throw UsageError("--known and --indices must be given together");

    const Dataset released = read_csv(cfg.released);

    Dataset known;
    std::vector<std::size_t> indices;
    std::optional<Dataset> normalized_truth;
    if (via_truth) {
        if (!(cfg.fraction > 0.0 && cfg.fraction < 1.0))
            throw UsageError("--fraction must lie strictly inside (0, 1)");
        normalized_truth = normalize_to_unit(read_csv(cfg.truth)).data;
        const std::size_t N = normalized_truth->N;
        std::size_t m = static_cast<std::size_t>(
            std::llround(cfg.fraction * static_cast<double>(N)));
        m = std::max<std::size_t>(2, std::min(m, N - 1));
        const std::uint64_t seed = resolve_seed(cfg.seed_opt, cfg.seed, 1);
        indices = Rng(seed).sample_indices(N, m);
        known = subset_records(*normalized_truth, indices);
    } else {
        indices = read_indices_file(cfg.indices);
        // The attacker holds raw originals and knows the release pipeline
        // normalizes records, so the known records are normalized here too.
        known = normalize_to_unit(read_csv(cfg.known)).data;
    }

    std::vector<std::pair<double, double>> bounds;
    if (!cfg.bounds.empty())
        bounds = read_bounds_file(cfg.bounds);
    else if (normalized_truth.has_value())
        bounds = attribute_bounds(*normalized_truth);
    else
        throw std::runtime_error(
            "no attribute bounds available: pass --bounds (or --truth)");

    DivergenceConfig div;
    div.grid_lo = -12.0;
    div.grid_hi = 12.0;
    div.grid_points = 512;

    AttackReport report = ak_ica_attack(released, known, indices, bounds, div);
    if (normalized_truth.has_value())
        report.accuracy =
            reconstruction_accuracy(report.reconstructed, *normalized_truth);

    write_csv(cfg.out, report.reconstructed);
    save_attack_report(cfg.report, report);

    std::cout << "converged: " << (report.converged ? "yes" : "no") << " ("
              << report.iterations_used << " iterations)\n";
    std::cout << "known fraction: " << format_double(report.known_fraction) << "\n";
    if (report.accuracy.has_value())
        std::cout << "reconstruction accuracy: " << format_double(*report.accuracy)
                  << "\n";
    std::cout << "wrote reconstruction to " << cfg.out << "\n";
    std::cout << "wrote report to " << cfg.report << "\n";
    return 0;
}

// --------------------------------------------------------------- evaluate

struct EvaluateConfig {
    std::string truth, reconstructed, out;
    bool raw = false;
    bool experiment1 = false;
    std::size_t N = 10000;
    double fraction = 0.1;
    std::size_t seeds = 10;
    std::uint64_t seed = 0;
    const CLI::Option* seed_opt = nullptr;
};

int cmd_evaluate(const EvaluateConfig& cfg) {
    if (cfg.experiment1) {
        const std::uint64_t base = resolve_seed(cfg.seed_opt, cfg.seed, 0);
        nlohmann::json runs = nlohmann::json::array();
        double mean = 0.0;
        for (std::size_t s = 0; s < cfg.seeds; ++s) {
            const ExtrapolationReport rep =
                run_experiment1(cfg.N, cfg.fraction, base + s);
            mean += rep.similarity;
            runs.push_back({{"seed", rep.seed}, {"similarity", rep.similarity}});
            std::cout << "seed " << rep.seed << ": similarity "
                      << format_double(rep.similarity) << "\n";
        }
        mean /= static_cast<double>(cfg.seeds);
        std::cout << "mean similarity: " << format_double(mean) << "\n";
        if (!cfg.out.empty()) {
            nlohmann::json j{{"N", cfg.N},
                             {"fraction", cfg.fraction},
                             {"mean_similarity", mean},
                             {"runs", runs}};
            std::ofstream f(cfg.out);
            if (!f.is_open())
                throw std::runtime_error("cannot open '" + cfg.out + "' for writing");
            f << j.dump(2) << "\n";
        }
        return 0;
    }

    if (cfg.truth.empty() || cfg.reconstructed.empty())
        throw UsageError(
            "pass --truth and --reconstructed (or --experiment1)");
    const Dataset truth_raw = read_csv(cfg.truth);
    const Dataset truth =
        cfg.raw ? truth_raw : normalize_to_unit(truth_raw).data;
    const Dataset reconstructed = read_csv(cfg.reconstructed);
    const double acc = reconstruction_accuracy(reconstructed, truth);
    std::cout << "reconstruction accuracy: " << format_double(acc) << "\n";
    if (!cfg.out.empty()) {
        nlohmann::json j{{"accuracy", acc}};
        std::ofstream f(cfg.out);
        if (!f.is_open())
            throw std::runtime_error("cannot open '" + cfg.out + "' for writing");
        f << j.dump(2) << "\n";
    }
    return 0;
}

// ------------------------------------------------------------------ bench

struct BenchConfig {
    std::vector<std::size_t> ns;
    std::vector<double> fractions;
    std::size_t seeds = 0;
    std::string synthetic, input, out, summary;
    std::uint64_t data_seed = 424242;
    std::size_t jobs = 0;
    const CLI::Option* data_seed_opt = nullptr;
};

Dataset parse_synthetic_spec(const std::string& spec, std::uint64_t data_seed) {
    std::size_t d = 0, N = 0;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        const std::string item = spec.substr(pos, comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw UsageError("--synthetic: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::uint64_t value = parse_u64(item.substr(eq + 1), "--synthetic " + key);
        if (key == "d")
            d = static_cast<std::size_t>(value);
        else if (key == "N")
            N = static_cast<std::size_t>(value);
        else
            throw UsageError("--synthetic: unknown key '" + key + "'");
        pos = comma + 1;
    }
    if (d == 0 || N == 0)
        throw UsageError("--synthetic needs both d=<int> and N=<int>");
    return synthetic_dataset(d, N, data_seed);
}

int cmd_bench(const BenchConfig& cfg) {
    if (cfg.ns.empty()) throw UsageError("--ns must list at least one part count");
    if (cfg.fractions.empty())
        throw UsageError("--fractions must list at least one fraction");
    for (double f : cfg.fractions)
        if (!(f > 0.0 && f < 1.0))
            throw UsageError("--fractions entries must lie strictly inside (0, 1)");
    if (cfg.seeds == 0) throw UsageError("--seeds must be >= 1");
    if (cfg.synthetic.empty() == cfg.input.empty())
        throw UsageError("pass exactly one of --synthetic or --input");

    const std::uint64_t data_seed =
        resolve_seed(cfg.data_seed_opt, cfg.data_seed, 424242);
    const Dataset data = cfg.input.empty()
                             ? parse_synthetic_spec(cfg.synthetic, data_seed)
                             : read_csv(cfg.input);

    std::vector<std::uint64_t> seeds(cfg.seeds);
    for (std::size_t s = 0; s < cfg.seeds; ++s) seeds[s] = s;

    std::size_t jobs = cfg.jobs;
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

    const std::vector<SweepCell> cells =
        run_figure1_sweep(data, cfg.ns, cfg.fractions, seeds, jobs);
    const std::vector<SweepSummaryRow> rows = summarize_sweep(cells);

    write_sweep_csv(cfg.out, cells);
    save_sweep_summary(cfg.summary, rows);

    for (const SweepSummaryRow& r : rows)
        std::cout << "n=" << r.n << " fraction=" << format_double(r.fraction)
                  << ": mean accuracy " << format_double(r.mean_accuracy)
                  << " (stddev " << format_double(r.stddev) << ", "
                  << r.non_converged << " non-converged)\n";
    std::cout << "wrote " << cells.size() << " cells to " << cfg.out << "\n";
    std::cout << "wrote summary to " << cfg.summary << "\n";
    return 0;
}

// ---------------------------------------------------------------- cluster

struct ClusterConfig {
    std::string log_a, log_b, meta, out;
    std::size_t k = 2;
    std::uint64_t seed = 0;
    const CLI::Option* seed_opt = nullptr;
};

int cmd_cluster(const ClusterConfig& cfg) {
    const Dataset ya = read_csv(cfg.log_a);
    const Dataset yb = read_csv(cfg.log_b);
    const Partitioning part = load_public_metadata(cfg.meta);
    const std::uint64_t seed = resolve_seed(cfg.seed_opt, cfg.seed, 1);

    const ClusteringResult result =
        cluster_corresponding(ya, yb, part, cfg.k, seed);
    write_assignments_csv(cfg.out, result);

    std::vector<std::size_t> sizes(cfg.k, 0);
    for (std::size_t a : result.assignments) ++sizes[a];
    std::cout << "cluster sizes:";
    for (std::size_t s : sizes) std::cout << ' ' << s;
    std::cout << "\n";
    std::cout << "wrote assignments to " << cfg.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotation-based data perturbation and the AK-ICA attack"};
    app.set_version_flag("--version", rotshield::version_string);
    app.require_subcommand(1);

    PerturbConfig pc;
    CLI::App* perturb = app.add_subcommand(
        "perturb", "normalize, partition and rotate a dataset");
    perturb->add_option("--input", pc.input, "original data CSV")->required();
    perturb->add_option("--n", pc.n, "number of parts (1 = plain rotation)")
        ->required()
        ->check(CLI::PositiveNumber);
    pc.seed_opt = perturb->add_option("--seed", pc.seed, "master seed");
    perturb->add_option("--out", pc.out, "released data CSV")->required();
    perturb->add_option("--key", pc.key, "secret key JSON")->required();
    perturb->add_option("--meta", pc.meta, "public metadata JSON (n + boundaries)");
    perturb->add_flag("--force", pc.force, "allow overwriting released files with the key");

    AttackConfig ac;
    CLI::App* attack = app.add_subcommand(
        "attack", "reconstruct originals from released data via ICA");
    attack->add_option("--released", ac.released, "released data CSV")->required();
    attack->add_option("--truth", ac.truth,
                       "original data CSV (known records are sampled from it; enables accuracy)");
    attack->add_option("--fraction", ac.fraction, "known fraction when sampling from --truth");
    ac.seed_opt = attack->add_option("--seed", ac.seed, "sampling seed for --fraction");
    attack->add_option("--known", ac.known, "known original records CSV");
    attack->add_option("--indices", ac.indices, "file of 0-based record indices for --known");
    attack->add_option("--bounds", ac.bounds, "per-attribute bounds CSV (columns min,max)");
    attack->add_option("--out", ac.out, "reconstructed data CSV")
        ->default_val("reconstructed.csv");
    attack->add_option("--report", ac.report, "attack report JSON")
        ->default_val("attack_report.json");

    EvaluateConfig ec;
    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "score a reconstruction or run the extrapolation experiment");
    evaluate->add_option("--truth", ec.truth, "original data CSV");
    evaluate->add_option("--reconstructed", ec.reconstructed, "reconstructed data CSV");
    evaluate->add_flag("--raw", ec.raw, "compare against raw originals (skip normalization)");
    evaluate->add_flag("--experiment1", ec.experiment1,
                       "KDE extrapolation experiment on standard-normal data");
    evaluate->add_option("--N", ec.N, "sample size for --experiment1");
    evaluate->add_option("--fraction", ec.fraction, "subsample fraction for --experiment1");
    evaluate->add_option("--seeds", ec.seeds, "number of seeds for --experiment1");
    ec.seed_opt = evaluate->add_option("--seed", ec.seed, "base seed for --experiment1");
    evaluate->add_option("--out", ec.out, "write results as JSON");

    BenchConfig bc;
    CLI::App* bench = app.add_subcommand(
        "bench", "attack-accuracy sweep over part counts and known fractions");
    bench->add_option("--ns", bc.ns, "part counts")->required()->delimiter(',');
    bench->add_option("--fractions", bc.fractions, "known fractions")
        ->required()
        ->delimiter(',');
    bench->add_option("--seeds", bc.seeds, "number of seeds (0..count-1)")->required();
    bench->add_option("--synthetic", bc.synthetic,
                      "generate benchmark data, e.g. d=3,N=5000");
    bench->add_option("--input", bc.input, "benchmark data CSV");
    bc.data_seed_opt =
        bench->add_option("--data-seed", bc.data_seed, "seed for --synthetic data");
    bench->add_option("--out", bc.out, "sweep CSV")->default_val("sweep.csv");
    bench->add_option("--summary", bc.summary, "summary JSON")
        ->default_val("sweep_summary.json");
    bench->add_option("--jobs", bc.jobs, "worker threads (0 = all cores)");

    ClusterConfig cc;
    CLI::App* cluster = app.add_subcommand(
        "cluster", "third-party difference clustering on two released logs");
    cluster->add_option("--log-a", cc.log_a, "first released log CSV")->required();
    cluster->add_option("--log-b", cc.log_b, "second released log CSV")->required();
    cluster->add_option("--meta", cc.meta, "public metadata JSON")->required();
    cluster->add_option("--k", cc.k, "number of clusters")
        ->required()
        ->check(CLI::PositiveNumber);
    cc.seed_opt = cluster->add_option("--seed", cc.seed, "clustering seed");
    cluster->add_option("--out", cc.out, "assignments CSV")
        ->default_val("assignments.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (perturb->parsed()) return cmd_perturb(pc);
        if (attack->parsed()) return cmd_attack(ac);
        if (evaluate->parsed()) return cmd_evaluate(ec);
        if (bench->parsed()) return cmd_bench(bc);
        if (cluster->parsed()) return cmd_cluster(cc);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2; // no subcommand (require_subcommand should have caught this)
}
