#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fedkm/fedkmeans.hpp"
#include "fedkm/scenario.hpp"

namespace fedkm {

/// Stable names used in labels, config files, and the CLI.
std::string channel_name(ChannelKind kind);
ChannelKind parse_channel(std::string_view name);  // awgn | flat | selective

/// One swept uplink configuration. An empty label is auto-derived from the
/// fields (e.g. "awgn_snr20_b5_d2_smin5", "perfect_smin0").
struct VariantSpec {
    std::string label;
    AggregationMode aggregation = AggregationMode::Oac;
    OacConfig oac;
    int s_min = 5;

    std::string resolved_label() const;
};

struct ExperimentSpec {
    ScenarioConfig scenario;
    /// Base algorithm settings. Per-variant fields (aggregation, oac, s_min)
    /// and the scenario-derived shape (num_clusters, dim) are filled in per
    /// run; set learning_rate, alpha, reinit_variance, v_max_init, rounds.
    FedConfig fed;
    std::vector<VariantSpec> variants;
    std::uint64_t master_seed = 1;
    int repetitions = 1;
    std::filesystem::path out_dir = "out";
    bool run_baseline = true;
    bool run_variants = true;

    void validate() const;
};

/// The default sweep: channels {awgn, flat, selective} x SNR {10, 20} dB x
/// (beta, digits) in {(3,1), (5,1), (3,2), (5,2)} x s_min in {0, 5}, over
/// the default scenario, 1000 rounds, learning rate 0.1.
ExperimentSpec default_experiment();

/// Read an ExperimentSpec from a JSON file; missing fields keep the defaults
/// of default_experiment() (an absent "variants" array keeps the full
/// default sweep).
ExperimentSpec load_experiment(const std::filesystem::path& path);

struct ExperimentOutput {
    std::vector<std::filesystem::path> files;
};

/// Run every variant x repetition plus one centralized baseline, writing to
/// spec.out_dir:
///   dataset.csv                  the generated scenario points
///   results_baseline.csv         per-round loss of centralized k-means
///   centroids_baseline.csv       its final centroids
///   results_<label>.csv          per-round records per repetition
///   centroids_<label>.csv        final centroids per repetition
///   manifest.json                full resolved configuration and seeds
ExperimentOutput run_experiment(const ExperimentSpec& spec);

/// Channel-use accounting for one round of uplink aggregation.
struct ResourceConfig {
    int dim = 2;           // values per centroid (L)
    int clusters = 100;    // centroids (C)
    int eds = 100;         // devices (K)
    int beta = 5;
    int digits = 2;
    // Digital-baseline link parameters; compression kept as an exact ratio.
    std::int64_t compression_num = 1;
    std::int64_t compression_den = 5;
    int n_bits = 8;        // bits per value before compression
    int r_bits = 1;        // bits per channel resource

    void validate() const;
};

struct ResourceReport {
    double oac = 0.0;      // dim * clusters * beta * digits, device-count free
    double non_oac = 0.0;  // dim * clusters * eds * n_bits * compression / r_bits
};

ResourceReport resource_report(const ResourceConfig& cfg);

/// Parse "3/4" or "2" into an exact numerator/denominator pair.
std::pair<std::int64_t, std::int64_t> parse_fraction(std::string_view text);

}  // namespace fedkm
