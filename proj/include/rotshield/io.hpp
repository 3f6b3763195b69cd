#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rotshield/attack.hpp"
#include "rotshield/csv.hpp"
#include "rotshield/evaluate.hpp"
#include "rotshield/key.hpp"
#include "rotshield/kmeans.hpp"

namespace rotshield {

/// Bumped whenever the key file layout changes; load_key refuses other
/// versions rather than guessing.
inline constexpr int key_format_version = 1;

namespace detail {

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out.is_open())
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

inline nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open())
        throw std::runtime_error("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

template <typename T>
T json_field(const nlohmann::json& j, const std::string& path,
             const std::string& name) {
    if (!j.contains(name))
        throw std::runtime_error(path + ": missing field '" + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": field '" + name + "': " + e.what());
    }
}

} // namespace detail

/// Serializes the full secret key. The file reveals the master seed, so it
/// must never travel with released data.
inline void save_key(const std::string& path, const PerturbationKey& key) {
    nlohmann::json j;
    j["version"] = key_format_version;
    j["master_seed"] = key.master_seed;
    j["n"] = key.partitioning.num_parts;
    j["boundaries"] = key.partitioning.boundaries;
    j["d"] = key.d;
    j["normalization_applied"] = key.normalization_applied;
    detail::write_text_file(path, j.dump(2) + "\n");
}

/// Loads a key file, checks the format version, and re-derives the per-part
/// rotation seeds from the master seed.
inline PerturbationKey load_key(const std::string& path) {
    const nlohmann::json j = detail::parse_json_file(path);
    const int version = detail::json_field<int>(j, path, "version");
    if (version != key_format_version)
        throw std::runtime_error(path + ": key format version " +
                                 std::to_string(version) + " not supported (expected " +
                                 std::to_string(key_format_version) + ")");
    PerturbationKey key;
    key.master_seed = detail::json_field<std::uint64_t>(j, path, "master_seed");
    key.partitioning.num_parts = detail::json_field<std::size_t>(j, path, "n");
    key.partitioning.boundaries =
        detail::json_field<std::vector<std::size_t>>(j, path, "boundaries");
    key.d = detail::json_field<std::size_t>(j, path, "d");
    key.normalization_applied =
        detail::json_field<bool>(j, path, "normalization_applied");
    try {
        rederive_part_seeds(key);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": invalid partitioning: " + e.what());
    }
    return key;
}

/// The public half of a key: part count and boundaries only — what a third
/// party needs for corresponding-subset operations, and nothing secret.
inline void save_public_metadata(const std::string& path,
                                 const PerturbationKey& key) {
    nlohmann::json j;
    j["n"] = key.partitioning.num_parts;
    j["boundaries"] = key.partitioning.boundaries;
    detail::write_text_file(path, j.dump(2) + "\n");
}

inline Partitioning load_public_metadata(const std::string& path) {
    const nlohmann::json j = detail::parse_json_file(path);
    Partitioning part;
    part.num_parts = detail::json_field<std::size_t>(j, path, "n");
    part.boundaries =
        detail::json_field<std::vector<std::size_t>>(j, path, "boundaries");
    try {
        validate_partitioning(part);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": invalid partitioning: " + e.what());
    }
    return part;
}

/// Attack report as JSON (everything except the reconstructed data, which
/// goes to its own CSV). `accuracy` appears only when it was filled in.
inline nlohmann::json attack_report_json(const AttackReport& report) {
    nlohmann::json j;
    j["converged"] = report.converged;
    j["iterations_used"] = report.iterations_used;
    j["known_fraction"] = report.known_fraction;
    j["per_component_divergence"] = report.per_component_divergence;
    j["alignment"] = {{"permutation", report.alignment.permutation},
                      {"signs", report.alignment.signs},
                      {"scales", report.alignment.scales}};
    if (report.accuracy.has_value()) j["accuracy"] = *report.accuracy;
    return j;
}

inline void save_attack_report(const std::string& path,
                               const AttackReport& report) {
    detail::write_text_file(path, attack_report_json(report).dump(2) + "\n");
}

/// Plot-ready sweep CSV: one row per cell, `converged` as 0/1.
inline void write_sweep_csv(const std::string& path,
                            const std::vector<SweepCell>& cells) {
    std::ofstream out(path);
    if (!out.is_open())
        throw std::runtime_error("write_sweep_csv: cannot open '" + path +
                                 "' for writing");
    out << "n,fraction,seed,accuracy,converged\n";
    for (const SweepCell& c : cells) {
        out << c.n << ',' << format_double(c.fraction) << ',' << c.seed << ','
            << format_double(c.accuracy) << ',' << (c.converged ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("write_sweep_csv: failed writing '" + path + "'");
}

/// Sweep summary as JSON: one object per (n, fraction) with the
/// converged-only mean/stddev and the non-convergence count.
inline nlohmann::json sweep_summary_json(
    const std::vector<SweepSummaryRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SweepSummaryRow& r : rows) {
        arr.push_back({{"n", r.n},
                       {"fraction", r.fraction},
                       {"mean_accuracy", r.mean_accuracy},
                       {"stddev", r.stddev},
                       {"cells", r.cells},
                       {"non_converged", r.non_converged}});
    }
    return nlohmann::json{{"rows", arr}};
}

inline void save_sweep_summary(const std::string& path,
                               const std::vector<SweepSummaryRow>& rows) {
    detail::write_text_file(path, sweep_summary_json(rows).dump(2) + "\n");
}

/// Cluster assignments as CSV: one row per record slot.
inline void write_assignments_csv(const std::string& path,
                                  const ClusteringResult& result) {
    std::ofstream out(path);
    if (!out.is_open())
        throw std::runtime_error("write_assignments_csv: cannot open '" + path +
                                 "' for writing");
    out << "slot,cluster\n";
    for (std::size_t j = 0; j < result.assignments.size(); ++j)
        out << j << ',' << result.assignments[j] << '\n';
    if (!out)
        throw std::runtime_error("write_assignments_csv: failed writing '" + path + "'");
}

} // namespace rotshield
