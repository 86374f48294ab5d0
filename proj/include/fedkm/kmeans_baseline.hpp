#pragma once

#include <vector>

#include "fedkm/dataset.hpp"

namespace fedkm {

struct BaselineConfig {
    int num_clusters = 1;
    double learning_rate = 1.0;  // 1 = standard k-means
    int rounds = 0;
    CentroidSet initial;

    void validate() const;
};

/// Clustering loss: partition the dataset by nearest centroid, then sum each
/// point's squared distance to its own cluster's mean. The reference point
/// is the mean of the current partition, not the centroid parameter.
double loss(const DataSet& data, const CentroidSet& centroids);

/// One Lloyd iteration: assign all points, then move every non-empty
/// cluster's centroid to (1-mu)*c + mu*mean. Empty clusters stay put.
CentroidSet lloyd_step(const DataSet& data, const CentroidSet& centroids, double mu);

struct BaselineResult {
    /// loss_trace[r] is the loss at the centroids after r iterations;
    /// entry 0 is the initial state. Length rounds + 1.
    std::vector<double> loss_trace;
    /// Centroid snapshots aligned with loss_trace.
    std::vector<std::vector<double>> centroid_trace;
    CentroidSet final_centroids;
};

/// Deterministic: no randomness anywhere in the baseline.
BaselineResult run_baseline(const BaselineConfig& cfg, const DataSet& data);

}  // namespace fedkm
