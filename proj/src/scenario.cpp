#include "fedkm/scenario.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>

#include "fedkm/text.hpp"

namespace fedkm {

int TileGrid::tile_of(double x, double y) const {
    if (!(x >= 0.0 && x <= area_side && y >= 0.0 && y <= area_side))
        throw std::domain_error("tile_of: point (" + format_double(x) + ", " + format_double(y) +
                                ") outside the area");
    int col = static_cast<int>(std::floor(x / tile_width()));
    int row = static_cast<int>(std::floor(y / tile_height()));
    // The outer edges belong to the last row/column.
    if (col >= cols) col = cols - 1;
    if (row >= rows) row = rows - 1;
    return row * cols + col;
}

std::pair<double, double> TileGrid::tile_center(int index) const {
    if (index < 0 || index >= count()) throw std::out_of_range("tile_center: bad tile index");
    const int row = index / cols;
    const int col = index % cols;
    return {(col + 0.5) * tile_width(), (row + 0.5) * tile_height()};
}

std::vector<GaussComponent> ScenarioConfig::default_components() {
    return {
        {0.6, 20.0, 20.0, 5.0, 1.0},
        {0.1, 75.0, 25.0, 7.0, 7.0},
        {0.1, 50.0, 50.0, 10.0, 1.0},
        {0.1, 75.0, 75.0, 0.5, 4.0},
        {0.1, 20.0, 60.0, 1.0, 10.0},
    };
}

void ScenarioConfig::validate() const {
    if (!(area_side > 0.0) || !std::isfinite(area_side))
        throw std::invalid_argument("scenario: area_side must be positive and finite");
    if (rows < 1 || cols < 1) throw std::invalid_argument("scenario: grid must be >= 1x1");
    if (gmm_count < 0 || uniform_count < 0)
        throw std::invalid_argument("scenario: point counts must be >= 0");
    if (gmm_count > 0) {
        if (gmm_components.empty())
            throw std::invalid_argument("scenario: gmm_count > 0 needs components");
        double weight_sum = 0.0;
        for (const GaussComponent& comp : gmm_components) {
            if (!(comp.weight >= 0.0)) throw std::invalid_argument("scenario: negative weight");
            if (!(comp.std_x > 0.0) || !(comp.std_y > 0.0))
                throw std::invalid_argument("scenario: component stds must be > 0");
            weight_sum += comp.weight;
        }
        if (std::abs(weight_sum - 1.0) > 1e-9)
            throw std::invalid_argument("scenario: component weights must sum to 1");
    }
}

int sample_component(std::span<const GaussComponent> components, Rng& rng) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        cumulative += components[i].weight;
        if (u < cumulative) return static_cast<int>(i);
    }
    // Weight rounding can leave the cumulative sum a hair below 1.
    return static_cast<int>(components.size()) - 1;
}

namespace {

constexpr int kMaxRedraws = 1000000;

}  // namespace

Scenario generate(const ScenarioConfig& cfg) {
    cfg.validate();

    Scenario scenario;
    scenario.grid = TileGrid{cfg.area_side, cfg.rows, cfg.cols};
    const int num_tiles = scenario.grid.count();

    scenario.pooled.dim = 2;
    scenario.ed_datasets.assign(num_tiles, DataSet{2, {}});
    scenario.ed_index.reserve(static_cast<std::size_t>(cfg.gmm_count) + cfg.uniform_count);

    Rng rng(derive_seed(cfg.seed, stream::kScenario));
    const auto add_point = [&](double x, double y) {
        const double coords[2] = {x, y};
        const int tile = scenario.grid.tile_of(x, y);
        scenario.pooled.append(coords);
        scenario.ed_index.push_back(tile);
        scenario.ed_datasets[static_cast<std::size_t>(tile)].append(coords);
    };

    for (int i = 0; i < cfg.gmm_count; ++i) {
        const GaussComponent& comp =
            cfg.gmm_components[static_cast<std::size_t>(sample_component(cfg.gmm_components, rng))];
        int attempts = 0;
        while (true) {
            const double x = comp.mean_x + comp.std_x * rng.gaussian();
            const double y = comp.mean_y + comp.std_y * rng.gaussian();
            if (x >= 0.0 && x <= cfg.area_side && y >= 0.0 && y <= cfg.area_side) {
                add_point(x, y);
                break;
            }
            if (++attempts >= kMaxRedraws)
                throw std::runtime_error("generate: component lies too far outside the area");
        }
    }
    for (int i = 0; i < cfg.uniform_count; ++i) {
        const double x = rng.uniform(0.0, cfg.area_side);
        const double y = rng.uniform(0.0, cfg.area_side);
        add_point(x, y);
    }

    scenario.initial_centroids.dim = 2;
    scenario.initial_centroids.values.reserve(static_cast<std::size_t>(num_tiles) * 2);
    for (int t = 0; t < num_tiles; ++t) {
        const auto [cx, cy] = scenario.grid.tile_center(t);
        scenario.initial_centroids.values.push_back(cx);
        scenario.initial_centroids.values.push_back(cy);
    }
    return scenario;
}

void save_dataset(const std::filesystem::path& path, const Scenario& scenario) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_dataset: cannot open " + path.string());
    out << "x,y,ed\n";
    for (std::size_t i = 0; i < scenario.pooled.size(); ++i) {
        const std::span<const double> p = scenario.pooled.point(i);
        out << format_double(p[0]) << ',' << format_double(p[1]) << ','
            << scenario.ed_index[i] << '\n';
    }
    if (!out) throw std::runtime_error("save_dataset: write failed for " + path.string());
}

LoadedDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_dataset: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "x,y,ed")
        throw std::runtime_error("load_dataset: missing 'x,y,ed' header in " + path.string());

    LoadedDataset loaded;
    loaded.pooled.dim = 2;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string_view> fields = split_fields(line, ',');
        if (fields.size() != 3)
            throw std::runtime_error("load_dataset: malformed record '" + line + "'");
        const double coords[2] = {parse_double(fields[0]), parse_double(fields[1])};
        loaded.pooled.append(coords);
        loaded.ed_index.push_back(static_cast<int>(parse_int(fields[2])));
    }
    return loaded;
}

std::vector<DataSet> split_by_ed(const DataSet& pooled, std::span<const int> ed_index,
                                 int num_eds) {
    if (pooled.size() != ed_index.size())
        throw std::invalid_argument("split_by_ed: index length != point count");
    std::vector<DataSet> out(static_cast<std::size_t>(num_eds), DataSet{pooled.dim, {}});
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        const int ed = ed_index[i];
        if (ed < 0 || ed >= num_eds) throw std::out_of_range("split_by_ed: device index range");
        out[static_cast<std::size_t>(ed)].append(pooled.point(i));
    }
    return out;
}

}  // namespace fedkm
