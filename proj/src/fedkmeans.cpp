#include "fedkm/fedkmeans.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "fedkm/balanced_codec.hpp"

namespace fedkm {

void FedConfig::validate() const {
    if (num_clusters < 1) throw std::invalid_argument("fed: num_clusters must be >= 1");
    if (dim < 1) throw std::invalid_argument("fed: dim must be >= 1");
    if (!(learning_rate > 0.0) || !(learning_rate <= 1.0))
        throw std::invalid_argument("fed: learning_rate must be in (0, 1]");
    if (s_min < 0) throw std::invalid_argument("fed: s_min must be >= 0");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("fed: alpha must be positive and finite");
    if (!(reinit_variance > 0.0) || !std::isfinite(reinit_variance))
        throw std::invalid_argument("fed: reinit_variance must be positive and finite");
    if (!(v_max_init > 0.0) || !std::isfinite(v_max_init))
        throw std::invalid_argument("fed: v_max_init must be positive and finite");
    if (rounds < 0) throw std::invalid_argument("fed: rounds must be >= 0");
    if (aggregation == AggregationMode::Oac) {
        CodecConfig probe{oac.beta, oac.digits, 1.0};
        probe.validate();
        if (std::isnan(oac.snr_db)) throw std::invalid_argument("fed: snr_db must not be NaN");
    }
}

std::vector<int> assign_local(const DataSet& local_data, const CentroidSet& centroids) {
    return assign_nearest(local_data, centroids);
}

LocalRoundReport local_report(const DataSet& local_data, const CentroidSet& centroids) {
    const int dim = centroids.dim;
    const int clusters = static_cast<int>(centroids.count());
    LocalRoundReport report;
    report.update.assign(static_cast<std::size_t>(clusters) * dim, 0.0);
    report.cardinalities.assign(clusters, 0);
    if (local_data.size() == 0) return report;

    const std::vector<int> labels = assign_nearest(local_data, centroids);
    for (std::size_t i = 0; i < local_data.size(); ++i) {
        const int c = labels[i];
        const std::span<const double> x = local_data.point(i);
        const std::span<const double> centre = centroids.centroid(c);
        double* slot = report.update.data() + static_cast<std::size_t>(c) * dim;
        for (int d = 0; d < dim; ++d) slot[d] += x[d] - centre[d];
        ++report.cardinalities[c];
    }
    for (double v : report.update) report.range_metric = std::max(report.range_metric, std::abs(v));
    return report;
}

namespace {

void check_report_shapes(std::span<const LocalRoundReport> reports, std::size_t num_values,
                         std::size_t clusters) {
    for (std::size_t k = 0; k < reports.size(); ++k) {
        if (reports[k].update.size() != num_values)
            throw std::invalid_argument("aggregate: report " + std::to_string(k) +
                                        " has wrong update length");
        if (reports[k].cardinalities.size() != clusters)
            throw std::invalid_argument("aggregate: report " + std::to_string(k) +
                                        " has wrong cardinality length");
    }
}

}  // namespace

AggregateResult aggregate(std::span<const LocalRoundReport> reports, double v_max,
                          const FedConfig& cfg, std::uint64_t round_seed) {
    const std::size_t num_values = static_cast<std::size_t>(cfg.num_clusters) * cfg.dim;
    check_report_shapes(reports, num_values, static_cast<std::size_t>(cfg.num_clusters));

    AggregateResult out;
    out.cardinalities.assign(cfg.num_clusters, 0);
    for (const LocalRoundReport& report : reports)
        for (int c = 0; c < cfg.num_clusters; ++c) out.cardinalities[c] += report.cardinalities[c];

    if (cfg.aggregation == AggregationMode::Perfect) {
        out.sums.assign(num_values, 0.0);
        for (const LocalRoundReport& report : reports)
            for (std::size_t q = 0; q < num_values; ++q) out.sums[q] += report.update[q];
        return out;
    }

    PhyConfig phy;
    phy.codec = CodecConfig{cfg.oac.beta, cfg.oac.digits, v_max};
    phy.num_values = static_cast<int>(num_values);
    phy.snr_db = cfg.oac.snr_db;
    phy.channel_kind = cfg.oac.channel;
    phy.num_eds = static_cast<int>(reports.size());
    phy.validate();

    std::vector<TransmitGrid> grids;
    grids.reserve(reports.size());
    for (std::size_t k = 0; k < reports.size(); ++k) {
        Rng symbol_rng(derive_seed(round_seed, stream::kQpsk, k));
        grids.push_back(modulate(reports[k].update, phy, symbol_rng));
    }
    Rng channel_rng(derive_seed(round_seed, stream::kChannel));
    const ChannelDraw channel = draw_channel(phy, channel_rng);
    Rng noise_rng(derive_seed(round_seed, stream::kNoise));
    const ReceivedGrid received = superpose(grids, channel, phy, noise_rng);
    out.sums = estimate_sums(received, phy);
    return out;
}

ServerUpdateResult server_update(const CentroidSet& centroids, std::span<const double> sums,
                                 std::span<const std::int64_t> cardinalities, double v_max_prev,
                                 std::span<const double> range_metrics, const FedConfig& cfg,
                                 Rng& server_rng) {
    const int dim = centroids.dim;
    const int clusters = static_cast<int>(centroids.count());
    if (static_cast<int>(sums.size()) != clusters * dim)
        throw std::invalid_argument("server_update: sums length mismatch");
    if (static_cast<int>(cardinalities.size()) != clusters)
        throw std::invalid_argument("server_update: cardinalities length mismatch");

    ServerUpdateResult out;
    out.centroids = centroids;
    out.centroids.round = centroids.round + 1;

    std::vector<int> starved;   // below the cardinality threshold
    std::vector<int> healthy;   // potential re-initialization donors
    for (int c = 0; c < clusters; ++c) {
        if (cardinalities[c] < cfg.s_min)
            starved.push_back(c);
        else
            healthy.push_back(c);
    }

    // Gradient step for the healthy clusters, from the pre-update positions.
    for (int c : healthy) {
        if (cardinalities[c] == 0) continue;
        const double scale = cfg.learning_rate / static_cast<double>(cardinalities[c]);
        std::span<double> target = out.centroids.centroid(c);
        for (int d = 0; d < dim; ++d)
            target[d] += scale * sums[static_cast<std::size_t>(c) * dim + d];
    }

    // Starved clusters respawn near a random healthy cluster's pre-update
    // position. Without any healthy donor the step is skipped entirely.
    if (!starved.empty() && !healthy.empty()) {
        const double sigma = std::sqrt(cfg.reinit_variance);
        for (int c : starved) {
            const int donor = healthy[static_cast<std::size_t>(
                server_rng.uniform_below(static_cast<std::uint64_t>(healthy.size())))];
            const std::span<const double> source = centroids.centroid(donor);
            std::span<double> target = out.centroids.centroid(c);
            for (int d = 0; d < dim; ++d) target[d] = source[d] + sigma * server_rng.gaussian();
            ++out.reinit_count;
        }
    }

    // Adapt the clamping range to the largest reported update magnitude,
    // holding the previous range when every update was all-zero.
    double peak = 0.0;
    for (double m : range_metrics) peak = std::max(peak, m);
    out.v_max = peak > 0.0 ? cfg.alpha * peak : v_max_prev;
    return out;
}

namespace {

/// One nearest-centroid pass over every device: per-device reports plus the
/// global per-cluster point sums and labels needed for the loss.
struct RoundStats {
    std::vector<LocalRoundReport> reports;
    std::vector<std::vector<int>> labels;          // per device
    std::vector<std::int64_t> global_cards;        // length C
    std::vector<double> global_point_sums;         // length C*dim, sum of x
};

RoundStats compute_round_stats(std::span<const DataSet> ed_datasets,
                               const CentroidSet& centroids) {
    const int dim = centroids.dim;
    const int clusters = static_cast<int>(centroids.count());
    RoundStats stats;
    stats.reports.reserve(ed_datasets.size());
    stats.labels.reserve(ed_datasets.size());
    stats.global_cards.assign(clusters, 0);
    stats.global_point_sums.assign(static_cast<std::size_t>(clusters) * dim, 0.0);

    for (const DataSet& local : ed_datasets) {
        LocalRoundReport report;
        report.update.assign(static_cast<std::size_t>(clusters) * dim, 0.0);
        report.cardinalities.assign(clusters, 0);
        std::vector<int> labels;
        if (local.size() > 0) {
            labels = assign_nearest(local, centroids);
            for (std::size_t i = 0; i < local.size(); ++i) {
                const int c = labels[i];
                const std::span<const double> x = local.point(i);
                const std::span<const double> centre = centroids.centroid(c);
                double* slot = report.update.data() + static_cast<std::size_t>(c) * dim;
                double* point_slot =
                    stats.global_point_sums.data() + static_cast<std::size_t>(c) * dim;
                for (int d = 0; d < dim; ++d) {
                    slot[d] += x[d] - centre[d];
                    point_slot[d] += x[d];
                }
                ++report.cardinalities[c];
                ++stats.global_cards[c];
            }
            for (double v : report.update)
                report.range_metric = std::max(report.range_metric, std::abs(v));
        }
        stats.reports.push_back(std::move(report));
        stats.labels.push_back(std::move(labels));
    }
    return stats;
}

/// Pooled clustering loss for the partition recorded in `stats`: squared
/// distance of every point to the mean of its assigned partition cell.
double loss_from_stats(std::span<const DataSet> ed_datasets, const RoundStats& stats, int dim,
                       int clusters) {
    std::vector<double> means(stats.global_point_sums);
    for (int c = 0; c < clusters; ++c) {
        if (stats.global_cards[c] == 0) continue;
        const double inv = 1.0 / static_cast<double>(stats.global_cards[c]);
        for (int d = 0; d < dim; ++d) means[static_cast<std::size_t>(c) * dim + d] *= inv;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < ed_datasets.size(); ++k) {
        const DataSet& local = ed_datasets[k];
        for (std::size_t i = 0; i < local.size(); ++i) {
            const int c = stats.labels[k][i];
            const std::span<const double> x = local.point(i);
            const double* mean = means.data() + static_cast<std::size_t>(c) * dim;
            for (int d = 0; d < dim; ++d) {
                const double diff = x[d] - mean[d];
                total += diff * diff;
            }
        }
    }
    return total;
}

}  // namespace

RunResult run(const FedConfig& cfg, std::span<const DataSet> ed_datasets,
              const CentroidSet& initial_centroids, std::uint64_t master_seed) {
    cfg.validate();
    if (initial_centroids.count() != static_cast<std::size_t>(cfg.num_clusters))
        throw std::invalid_argument("run: initial centroid count != num_clusters");
    if (initial_centroids.dim != cfg.dim)
        throw std::invalid_argument("run: initial centroid dim != dim");
    if (ed_datasets.empty()) throw std::invalid_argument("run: need at least one device");
    for (const DataSet& local : ed_datasets)
        if (local.size() > 0 && local.dim != cfg.dim)
            throw std::invalid_argument("run: device dataset dim != dim");

    const std::size_t num_values = static_cast<std::size_t>(cfg.num_clusters) * cfg.dim;

    RunResult result;
    CentroidSet centroids = initial_centroids;
    centroids.round = 0;
    double v_max = cfg.v_max_init;

    RoundStats stats = compute_round_stats(ed_datasets, centroids);
    RoundLog initial_log;
    initial_log.round = 0;
    initial_log.loss = loss_from_stats(ed_datasets, stats, cfg.dim, cfg.num_clusters);
    initial_log.v_max = v_max;
    initial_log.cardinalities = stats.global_cards;
    result.rounds.push_back(std::move(initial_log));
    result.centroid_trace.push_back(centroids.values);

    for (int round = 1; round <= cfg.rounds; ++round) {
        const std::uint64_t round_seed = derive_seed(master_seed, stream::kRound, round);

        const AggregateResult agg = aggregate(stats.reports, v_max, cfg, round_seed);
        std::vector<double> exact(num_values, 0.0);
        for (const LocalRoundReport& report : stats.reports)
            for (std::size_t q = 0; q < num_values; ++q) exact[q] += report.update[q];
        double error_sq = 0.0;
        for (std::size_t q = 0; q < num_values; ++q) {
            const double diff = exact[q] - agg.sums[q];
            error_sq += diff * diff;
        }

        std::vector<double> metrics;
        metrics.reserve(stats.reports.size());
        for (const LocalRoundReport& report : stats.reports)
            metrics.push_back(report.range_metric);

        Rng server_rng(derive_seed(round_seed, stream::kServer));
        const ServerUpdateResult upd = server_update(centroids, agg.sums, agg.cardinalities,
                                                     v_max, metrics, cfg, server_rng);

        RoundStats next_stats = compute_round_stats(ed_datasets, upd.centroids);
        RoundLog log;
        log.round = round;
        log.loss = loss_from_stats(ed_datasets, next_stats, cfg.dim, cfg.num_clusters);
        log.v_max = v_max;
        log.cardinalities = agg.cardinalities;
        log.reinit_count = upd.reinit_count;
        log.aggregation_error = std::sqrt(error_sq);
        result.rounds.push_back(std::move(log));

        centroids = upd.centroids;
        v_max = upd.v_max;
        stats = std::move(next_stats);
        result.centroid_trace.push_back(centroids.values);
    }

    result.final_centroids = std::move(centroids);
    return result;
}

}  // namespace fedkm
