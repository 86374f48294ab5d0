// Tests for nearest-centroid assignment and the centralized k-means
// baseline: loss definition, Lloyd steps, monotonicity, and brute-force
// agreement on tiny instances.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fedkm/dataset.hpp"
#include "fedkm/kmeans_baseline.hpp"
#include "fedkm/rng.hpp"

using namespace fedkm;

namespace {

DataSet make_data(int dim, std::vector<double> values) {
    return DataSet{dim, std::move(values)};
}

CentroidSet make_centroids(int dim, std::vector<double> values) {
    return CentroidSet{dim, std::move(values), 0};
}

DataSet uniform_points(int dim, int count, double lo, double hi, std::uint64_t seed) {
    DataSet data{dim, {}};
    Rng rng(seed);
    for (int i = 0; i < count * dim; ++i) data.values.push_back(rng.uniform(lo, hi));
    return data;
}

}  // namespace

TEST_CASE("assignment picks the nearest centroid, ties to the lowest index") {
    const DataSet data = make_data(2, {3.0, 0.0, 5.0, 0.0, 9.0, 0.0});
    const CentroidSet centroids = make_centroids(2, {0.0, 0.0, 10.0, 0.0});
    const std::vector<int> labels = assign_nearest(data, centroids);
    REQUIRE(labels.size() == 3);
    CHECK(labels[0] == 0);  // strictly nearer
    CHECK(labels[1] == 0);  // equidistant: tie-break to index 0
    CHECK(labels[2] == 1);
}

TEST_CASE("assignment with one centroid labels everything zero") {
    const DataSet data = uniform_points(2, 40, -5.0, 5.0, 17);
    const CentroidSet one = make_centroids(2, {1.0, -1.0});
    for (int label : assign_nearest(data, one)) CHECK(label == 0);
}

TEST_CASE("assignment agrees with a brute-force assigner") {
    const DataSet data = uniform_points(3, 200, -10.0, 10.0, 23);
    CentroidSet centroids = make_centroids(3, {});
    Rng rng(29);
    for (int i = 0; i < 5 * 3; ++i) centroids.values.push_back(rng.uniform(-10.0, 10.0));

    const std::vector<int> labels = assign_nearest(data, centroids);
    for (std::size_t i = 0; i < data.size(); ++i) {
        int best = 0;
        double best_dist = squared_distance(data.point(i), centroids.centroid(0));
        for (std::size_t c = 1; c < centroids.count(); ++c) {
            const double dist = squared_distance(data.point(i), centroids.centroid(c));
            if (dist < best_dist) {
                best = static_cast<int>(c);
                best_dist = dist;
            }
        }
        REQUIRE(labels[i] == best);
    }
}

TEST_CASE("assignment rejects empty centroid sets and dimension mismatches") {
    const DataSet data = make_data(2, {0.0, 0.0});
    CHECK_THROWS_AS(assign_nearest(data, make_centroids(2, {})), std::invalid_argument);
    CHECK_THROWS_AS(assign_nearest(data, make_centroids(3, {0.0, 0.0, 0.0})),
                    std::invalid_argument);
}

TEST_CASE("loss measures spread around the partition means") {
    SUBCASE("two points, one cluster") {
        const DataSet data = make_data(2, {0.0, 0.0, 2.0, 0.0});
        CHECK(loss(data, make_centroids(2, {5.0, 5.0})) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("each point its own cluster") {
        const DataSet data = make_data(2, {0.0, 0.0, 2.0, 0.0});
        const CentroidSet centroids = make_centroids(2, {0.0, 0.0, 2.0, 0.0});
        CHECK(loss(data, centroids) == 0.0);
    }
    SUBCASE("reference point is the partition mean, not the centroid") {
        // Partition {{(0,0),(2,0)}, {(10,0)}}: means (1,0) and (10,0),
        // loss 1 + 1 + 0 = 2 regardless of the centroid parameters.
        const DataSet data = make_data(2, {0.0, 0.0, 2.0, 0.0, 10.0, 0.0});
        const CentroidSet centroids = make_centroids(2, {1.0, 0.0, 10.0, 0.0});
        CHECK(loss(data, centroids) == doctest::Approx(2.0).epsilon(1e-12));
        // Nudging a centroid without changing the partition keeps the loss.
        const CentroidSet nudged = make_centroids(2, {1.5, 0.0, 10.0, 0.0});
        CHECK(loss(data, nudged) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("empty dataset is rejected") {
        CHECK_THROWS_AS(loss(make_data(2, {}), make_centroids(2, {0.0, 0.0})),
                        std::invalid_argument);
    }
}

TEST_CASE("lloyd step moves centroids toward cluster means") {
    SUBCASE("full step lands on the mean") {
        const DataSet data = make_data(2, {0.0, 0.0, 4.0, 0.0});
        const CentroidSet centroids = make_centroids(2, {1.0, 0.0});
        const CentroidSet next = lloyd_step(data, centroids, 1.0);
        CHECK(next.centroid(0)[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(next.centroid(0)[1] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(next.round == 1);
    }
    SUBCASE("half step is the convex midpoint") {
        const DataSet data = make_data(2, {4.0, 0.0});
        const CentroidSet centroids = make_centroids(2, {0.0, 0.0});
        const CentroidSet next = lloyd_step(data, centroids, 0.5);
        CHECK(next.centroid(0)[0] == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("a centroid owning no points stays put") {
        const DataSet data = make_data(2, {0.0, 0.0, 1.0, 0.0});
        const CentroidSet centroids = make_centroids(2, {0.5, 0.0, 50.0, 50.0});
        const CentroidSet next = lloyd_step(data, centroids, 1.0);
        CHECK(next.centroid(1)[0] == 50.0);
        CHECK(next.centroid(1)[1] == 50.0);
    }
}

TEST_CASE("baseline config validation") {
    BaselineConfig cfg;
    cfg.num_clusters = 1;
    cfg.initial = make_centroids(2, {0.0, 0.0});
    cfg.rounds = 3;
    CHECK_NOTHROW(cfg.validate());
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.learning_rate = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.learning_rate = 1.0;
    cfg.rounds = -1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.rounds = 0;
    cfg.num_clusters = 2;  // initial holds only one centroid
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("baseline run: converged input gives a flat trace") {
    const DataSet data = make_data(2, {0.0, 0.0, 2.0, 0.0, 10.0, 0.0, 12.0, 0.0});
    BaselineConfig cfg;
    cfg.num_clusters = 2;
    cfg.rounds = 10;
    cfg.initial = make_centroids(2, {1.0, 0.0, 11.0, 0.0});  // already the means
    const BaselineResult result = run_baseline(cfg, data);
    REQUIRE(result.loss_trace.size() == 11);
    for (double l : result.loss_trace) CHECK(l == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(result.final_centroids.centroid(0)[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.final_centroids.centroid(1)[0] == doctest::Approx(11.0).epsilon(1e-12));
}

TEST_CASE("baseline run: centroids on the points pin the loss at zero") {
    const DataSet data = make_data(2, {1.0, 2.0, 5.0, 6.0});
    BaselineConfig cfg;
    cfg.num_clusters = 2;
    cfg.rounds = 5;
    cfg.initial = make_centroids(2, {1.0, 2.0, 5.0, 6.0});
    const BaselineResult result = run_baseline(cfg, data);
    for (double l : result.loss_trace) CHECK(l == 0.0);
}

TEST_CASE("baseline run: full-step loss trace is non-increasing") {
    const DataSet data = uniform_points(2, 300, 0.0, 100.0, 31);
    BaselineConfig cfg;
    cfg.num_clusters = 6;
    cfg.rounds = 60;
    cfg.initial = make_centroids(2, {});
    Rng rng(37);
    for (int i = 0; i < 6 * 2; ++i) cfg.initial.values.push_back(rng.uniform(0.0, 100.0));
    const BaselineResult result = run_baseline(cfg, data);
    REQUIRE(result.loss_trace.size() == 61);
    REQUIRE(result.centroid_trace.size() == 61);
    for (std::size_t r = 1; r < result.loss_trace.size(); ++r)
        CHECK(result.loss_trace[r] <= result.loss_trace[r - 1] + 1e-9);
}

TEST_CASE("baseline run is invariant to the dataset's point order") {
    const DataSet data = uniform_points(2, 120, 0.0, 50.0, 41);
    DataSet reversed{2, {}};
    for (std::size_t i = data.size(); i-- > 0;) reversed.append(data.point(i));

    BaselineConfig cfg;
    cfg.num_clusters = 4;
    cfg.rounds = 25;
    cfg.initial = make_centroids(2, {10.0, 10.0, 40.0, 10.0, 10.0, 40.0, 40.0, 40.0});
    const BaselineResult a = run_baseline(cfg, data);
    const BaselineResult b = run_baseline(cfg, reversed);
    REQUIRE(a.loss_trace.size() == b.loss_trace.size());
    for (std::size_t r = 0; r < a.loss_trace.size(); ++r)
        CHECK(a.loss_trace[r] == doctest::Approx(b.loss_trace[r]).epsilon(1e-12));
    for (std::size_t i = 0; i < a.final_centroids.values.size(); ++i)
        CHECK(a.final_centroids.values[i] ==
              doctest::Approx(b.final_centroids.values[i]).epsilon(1e-12));
}

TEST_CASE("converged partition matches a brute-force local optimum") {
    // 8 points, 3 clusters: enumerate all 3^8 assignments, keep the
    // self-consistent ones (every point nearest its own cell's mean under
    // the tie-break), and require the converged labels to be one of them.
    const DataSet data =
        make_data(2, {0.0, 0.0, 1.0, 0.2, 0.5, 1.0, 6.0, 6.0, 7.0, 6.4, 6.5, 7.2, 12.0, 1.0,
                      12.5, 0.5});
    const int num_points = 8;
    const int num_clusters = 3;

    BaselineConfig cfg;
    cfg.num_clusters = num_clusters;
    cfg.rounds = 50;
    cfg.initial = make_centroids(2, {0.0, 0.0, 6.0, 6.0, 12.0, 1.0});
    const BaselineResult result = run_baseline(cfg, data);
    const std::vector<int> converged = assign_nearest(data, result.final_centroids);

    // The converged centroids must be a Lloyd fixed point.
    const CentroidSet stepped = lloyd_step(data, result.final_centroids, 1.0);
    for (std::size_t i = 0; i < stepped.values.size(); ++i)
        CHECK(stepped.values[i] == doctest::Approx(result.final_centroids.values[i]).epsilon(1e-12));

    const auto partition_means = [&](const std::vector<int>& labels) {
        std::vector<double> means(num_clusters * 2, 0.0);
        std::vector<int> counts(num_clusters, 0);
        for (int i = 0; i < num_points; ++i) {
            means[labels[i] * 2 + 0] += data.point(i)[0];
            means[labels[i] * 2 + 1] += data.point(i)[1];
            ++counts[labels[i]];
        }
        for (int c = 0; c < num_clusters; ++c)
            if (counts[c] > 0) {
                means[c * 2 + 0] /= counts[c];
                means[c * 2 + 1] /= counts[c];
            }
        return std::pair{means, counts};
    };

    bool found = false;
    std::vector<int> labels(num_points, 0);
    for (int code = 0; code < 6561 && !found; ++code) {  // 3^8 assignments
        int rest = code;
        for (int i = 0; i < num_points; ++i) {
            labels[i] = rest % num_clusters;
            rest /= num_clusters;
        }
        const auto [means, counts] = partition_means(labels);
        bool stable = true;
        for (int i = 0; i < num_points && stable; ++i) {
            int best = -1;
            double best_dist = 0.0;
            for (int c = 0; c < num_clusters; ++c) {
                if (counts[c] == 0) continue;  // empty cells own nothing
                const double dx = data.point(i)[0] - means[c * 2 + 0];
                const double dy = data.point(i)[1] - means[c * 2 + 1];
                const double dist = dx * dx + dy * dy;
                if (best < 0 || dist < best_dist) {
                    best = c;
                    best_dist = dist;
                }
            }
            stable = best == labels[i];
        }
        if (stable && labels == converged) found = true;
    }
    CHECK(found);
}
