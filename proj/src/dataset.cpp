#include "fedkm/dataset.hpp"

#include <limits>
#include <stdexcept>

namespace fedkm {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d2 += diff * diff;
    }
    return d2;
}

std::vector<int> assign_nearest(const DataSet& data, const CentroidSet& centroids) {
    if (centroids.count() == 0) {
        throw std::invalid_argument("assign_nearest: empty centroid set");
    }
    if (data.dim != centroids.dim) {
        throw std::invalid_argument("assign_nearest: dimension mismatch");
    }
    const std::size_t n = data.size();
    const std::size_t c_count = centroids.count();
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const double> x = data.point(i);
        int best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < c_count; ++c) {
            const double d2 = squared_distance(x, centroids.centroid(c));
            if (d2 < best_d2) {
                best_d2 = d2;
                best = static_cast<int>(c);
            }
        }
        labels[i] = best;
    }
    return labels;
}

}  // namespace fedkm
