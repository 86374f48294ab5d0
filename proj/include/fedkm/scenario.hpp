#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "fedkm/dataset.hpp"
#include "fedkm/rng.hpp"

namespace fedkm {

/// One axis-aligned Gaussian mixture component in the plane.
struct GaussComponent {
    double weight = 0.0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double std_x = 1.0;
    double std_y = 1.0;
};

/// Rectangular area split into rows x cols equal tiles; tile index is
/// row-major from the origin corner. Tiles are half-open [a, b) on each
/// axis except the final row/column, which also owns the outer edge.
struct TileGrid {
    double area_side = 100.0;
    int rows = 10;
    int cols = 10;

    int count() const { return rows * cols; }
    double tile_width() const { return area_side / cols; }
    double tile_height() const { return area_side / rows; }

    /// Tile containing (x, y); throws std::domain_error if out of area.
    int tile_of(double x, double y) const;

    /// Center coordinates of a tile.
    std::pair<double, double> tile_center(int index) const;
};

struct ScenarioConfig {
    double area_side = 100.0;
    int rows = 10;
    int cols = 10;
    std::vector<GaussComponent> gmm_components = default_components();
    int gmm_count = 10000;
    int uniform_count = 100;
    std::uint64_t seed = 1;

    /// The five shopping-mall hot spots of the default layout.
    static std::vector<GaussComponent> default_components();
    void validate() const;
};

/// Generated deployment: the pooled dataset in draw order, the same points
/// split across the tiles' devices, and centroids at the tile centers.
struct Scenario {
    TileGrid grid;
    DataSet pooled;                     // dim 2
    std::vector<int> ed_index;          // owning tile of each pooled point
    std::vector<DataSet> ed_datasets;   // length grid.count()
    CentroidSet initial_centroids;      // grid.count() tile centers
};

/// Categorical draw over the component weights (cumulative inversion);
/// exposed so sampling proportions can be checked directly.
int sample_component(std::span<const GaussComponent> components, Rng& rng);

/// Draw the mixture + uniform dataset and assign points to tiles. Gaussian
/// draws landing outside the area are redrawn from the same component so no
/// probability mass piles up on the boundary.
Scenario generate(const ScenarioConfig& cfg);

/// Plain-text dataset exchange format: header "x,y,ed", then one
/// "x,y,ed_index" record per point with round-trip-exact coordinates.
void save_dataset(const std::filesystem::path& path, const Scenario& scenario);

struct LoadedDataset {
    DataSet pooled;             // dim 2, file order
    std::vector<int> ed_index;  // aligned with pooled
};

LoadedDataset load_dataset(const std::filesystem::path& path);

/// Regroup a pooled dataset into per-device datasets by stored tile index.
std::vector<DataSet> split_by_ed(const DataSet& pooled, std::span<const int> ed_index,
                                 int num_eds);

}  // namespace fedkm
