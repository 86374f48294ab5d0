#include "fedkm/kmeans_baseline.hpp"

#include <stdexcept>

namespace fedkm {

void BaselineConfig::validate() const {
    if (num_clusters < 1) {
        throw std::invalid_argument("BaselineConfig: num_clusters must be >= 1");
    }
    if (!(learning_rate > 0.0) || learning_rate > 1.0) {
        throw std::invalid_argument("BaselineConfig: learning_rate must be in (0, 1]");
    }
    if (rounds < 0) {
        throw std::invalid_argument("BaselineConfig: rounds must be >= 0");
    }
    if (initial.count() != static_cast<std::size_t>(num_clusters)) {
        throw std::invalid_argument("BaselineConfig: initial centroid count mismatch");
    }
}

namespace {

struct PartitionStats {
    std::vector<std::int64_t> counts;  // per cluster
    std::vector<double> sums;          // per cluster, dim-strided
    std::vector<int> labels;
};

PartitionStats partition(const DataSet& data, const CentroidSet& centroids) {
    const std::size_t c_count = centroids.count();
    const int dim = centroids.dim;
    PartitionStats stats;
    stats.labels = assign_nearest(data, centroids);
    stats.counts.assign(c_count, 0);
    stats.sums.assign(c_count * static_cast<std::size_t>(dim), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto c = static_cast<std::size_t>(stats.labels[i]);
        stats.counts[c] += 1;
        const std::span<const double> x = data.point(i);
        for (int d = 0; d < dim; ++d) {
            stats.sums[c * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] += x[d];
        }
    }
    return stats;
}

double loss_of_partition(const DataSet& data, const PartitionStats& stats, int dim) {
    const std::size_t c_count = stats.counts.size();
    std::vector<double> means(stats.sums);
    for (std::size_t c = 0; c < c_count; ++c) {
        if (stats.counts[c] == 0) continue;
        for (int d = 0; d < dim; ++d) {
            means[c * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] /=
                static_cast<double>(stats.counts[c]);
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto c = static_cast<std::size_t>(stats.labels[i]);
        const std::span<const double> x = data.point(i);
        const std::span<const double> mean{means.data() + c * static_cast<std::size_t>(dim),
                                           static_cast<std::size_t>(dim)};
        total += squared_distance(x, mean);
    }
    return total;
}

CentroidSet apply_update(const CentroidSet& centroids, const PartitionStats& stats, double mu) {
    CentroidSet next = centroids;
    const int dim = centroids.dim;
    for (std::size_t c = 0; c < centroids.count(); ++c) {
        if (stats.counts[c] == 0) continue;  // empty cluster keeps its centroid
        const double inv = 1.0 / static_cast<double>(stats.counts[c]);
        for (int d = 0; d < dim; ++d) {
            const std::size_t idx = c * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d);
            next.values[idx] = (1.0 - mu) * centroids.values[idx] + mu * stats.sums[idx] * inv;
        }
    }
    next.round = centroids.round + 1;
    return next;
}

}  // namespace

double loss(const DataSet& data, const CentroidSet& centroids) {
    if (data.size() == 0) {
        throw std::invalid_argument("loss: empty dataset");
    }
    const PartitionStats stats = partition(data, centroids);
    return loss_of_partition(data, stats, centroids.dim);
}

CentroidSet lloyd_step(const DataSet& data, const CentroidSet& centroids, double mu) {
    const PartitionStats stats = partition(data, centroids);
    return apply_update(centroids, stats, mu);
}

BaselineResult run_baseline(const BaselineConfig& cfg, const DataSet& data) {
    cfg.validate();
    if (data.size() == 0) {
        throw std::invalid_argument("run_baseline: empty dataset");
    }
    BaselineResult result;
    result.loss_trace.reserve(static_cast<std::size_t>(cfg.rounds) + 1);
    result.centroid_trace.reserve(static_cast<std::size_t>(cfg.rounds) + 1);

    CentroidSet centroids = cfg.initial;
    centroids.round = 0;
    for (int r = 0; r < cfg.rounds; ++r) {
        const PartitionStats stats = partition(data, centroids);
        result.loss_trace.push_back(loss_of_partition(data, stats, centroids.dim));
        result.centroid_trace.push_back(centroids.values);
        centroids = apply_update(centroids, stats, cfg.learning_rate);
    }
    const PartitionStats final_stats = partition(data, centroids);
    result.loss_trace.push_back(loss_of_partition(data, final_stats, centroids.dim));
    result.centroid_trace.push_back(centroids.values);
    result.final_centroids = std::move(centroids);
    return result;
}

}  // namespace fedkm
