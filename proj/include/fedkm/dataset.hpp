#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fedkm {

/// Flat row-major point store: point i occupies values[i*dim .. i*dim+dim).
struct DataSet {
    int dim = 0;
    std::vector<double> values;

    std::size_t size() const { return dim > 0 ? values.size() / static_cast<std::size_t>(dim) : 0; }

    std::span<const double> point(std::size_t i) const {
        return {values.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }

    void append(std::span<const double> p) { values.insert(values.end(), p.begin(), p.end()); }
};

/// Server-side round state: C centroids in R^dim plus the round counter.
struct CentroidSet {
    int dim = 0;
    std::vector<double> values;
    int round = 0;

    std::size_t count() const { return dim > 0 ? values.size() / static_cast<std::size_t>(dim) : 0; }

    std::span<const double> centroid(std::size_t c) const {
        return {values.data() + c * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }

    std::span<double> centroid(std::size_t c) {
        return {values.data() + c * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Nearest-centroid label per point, Euclidean distance, ties broken by the
/// lowest centroid index. Throws std::invalid_argument on an empty centroid
/// set or a dimension mismatch.
std::vector<int> assign_nearest(const DataSet& data, const CentroidSet& centroids);

}  // namespace fedkm
