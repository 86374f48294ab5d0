#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fedkm/dataset.hpp"
#include "fedkm/phy_oac.hpp"
#include "fedkm/rng.hpp"

namespace fedkm {

enum class AggregationMode { Perfect, Oac };

/// Codec and channel parameters of the over-the-air uplink. v_max is not
/// here: it is round state, adapted by the server.
struct OacConfig {
    int beta = 5;
    int digits = 2;
    double snr_db = 20.0;
    ChannelKind channel = ChannelKind::Awgn;
};

struct FedConfig {
    int num_clusters = 1;      // C
    int dim = 2;               // L
    double learning_rate = 0.1;
    int s_min = 0;             // cardinality threshold for re-initialization
    double alpha = 1.2;        // dynamic-range adaptation gain
    double reinit_variance = 1.0;
    double v_max_init = 300.0;
    int rounds = 0;
    AggregationMode aggregation = AggregationMode::Perfect;
    OacConfig oac;             // used when aggregation == Oac

    void validate() const;
};

/// One device's round contribution. `update` holds the C per-cluster update
/// vectors flattened cluster-major: element q maps to cluster q/dim,
/// dimension q%dim, for q in [0, C*dim).
struct LocalRoundReport {
    std::vector<double> update;
    std::vector<std::int64_t> cardinalities;
    double range_metric = 0.0;  // max_q |update[q]|
};

/// Nearest-centroid labels on the device's local dataset; ties go to the
/// lowest cluster index.
std::vector<int> assign_local(const DataSet& local_data, const CentroidSet& centroids);

/// Per-cluster update vectors sum_{x in P_c}(x - c), local cardinalities,
/// and the dynamic-range metric reported on the side channel.
LocalRoundReport local_report(const DataSet& local_data, const CentroidSet& centroids);

struct AggregateResult {
    std::vector<double> sums;                  // length C*dim
    std::vector<std::int64_t> cardinalities;   // length C, error-free side channel
};

/// Sum the K devices' flattened update vectors: exactly under Perfect, or
/// through modulate -> channel -> superpose -> estimate_sums under Oac with
/// the given clamping range. Cardinalities are always summed exactly.
/// All randomness (QPSK symbols, channel, noise) derives from round_seed.
AggregateResult aggregate(std::span<const LocalRoundReport> reports, double v_max,
                          const FedConfig& cfg, std::uint64_t round_seed);

struct ServerUpdateResult {
    CentroidSet centroids;
    double v_max = 0.0;
    int reinit_count = 0;
};

/// Server-side round step:
///   - clusters with cardinality >= s_min move by learning_rate * sum/card
///     (unchanged when the cardinality is zero, possible only for s_min=0);
///   - clusters below s_min are re-initialized to a Gaussian perturbation of
///     a donor chosen uniformly among the healthy clusters (skipped when no
///     healthy cluster exists);
///   - the next clamping range is alpha * max_k range_metric_k, keeping the
///     previous value when every device reported an all-zero update.
ServerUpdateResult server_update(const CentroidSet& centroids, std::span<const double> sums,
                                 std::span<const std::int64_t> cardinalities, double v_max_prev,
                                 std::span<const double> range_metrics, const FedConfig& cfg,
                                 Rng& server_rng);

struct RoundLog {
    int round = 0;
    /// Clustering loss on the pooled dataset after this round's update.
    double loss = 0.0;
    /// Clamping range the devices used in this round's uplink.
    double v_max = 0.0;
    /// Global cardinalities measured this round (what the server acted on).
    std::vector<std::int64_t> cardinalities;
    int reinit_count = 0;
    /// || exact sum - estimated sum ||_2 over all C*dim components.
    double aggregation_error = 0.0;
};

struct RunResult {
    std::vector<RoundLog> rounds;                    // entry 0 = initial state
    std::vector<std::vector<double>> centroid_trace; // aligned with rounds
    CentroidSet final_centroids;
};

/// Execute N federated rounds. Deterministic for a fixed master_seed: every
/// random stream (per-device QPSK, channel, noise, server re-initialization)
/// is derived from (master_seed, round, purpose, device).
RunResult run(const FedConfig& cfg, std::span<const DataSet> ed_datasets,
              const CentroidSet& initial_centroids, std::uint64_t master_seed);

}  // namespace fedkm
