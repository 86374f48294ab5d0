#include "fedkm/experiment.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "fedkm/kmeans_baseline.hpp"
#include "fedkm/rng.hpp"
#include "fedkm/text.hpp"
#include "json.hpp"

namespace fedkm {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string snr_label(double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0.0) return "inf";
    return format_double(snr_db);
}

bool label_is_safe(const std::string& label) {
    if (label.empty()) return false;
    for (char c : label) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.' || c == '+';
        if (!ok) return false;
    }
    return true;
}

}  // namespace

std::string channel_name(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::Awgn: return "awgn";
        case ChannelKind::FlatFading: return "flat";
        case ChannelKind::FreqSelective: return "selective";
    }
    throw std::logic_error("channel_name: unknown kind");
}

ChannelKind parse_channel(std::string_view name) {
    if (name == "awgn") return ChannelKind::Awgn;
    if (name == "flat") return ChannelKind::FlatFading;
    if (name == "selective") return ChannelKind::FreqSelective;
    throw std::invalid_argument("unknown channel '" + std::string(name) +
                                "' (expected awgn, flat, or selective)");
}

std::string VariantSpec::resolved_label() const {
    if (!label.empty()) return label;
    if (aggregation == AggregationMode::Perfect)
        return "perfect_smin" + std::to_string(s_min);
    return channel_name(oac.channel) + "_snr" + snr_label(oac.snr_db) + "_b" +
           std::to_string(oac.beta) + "_d" + std::to_string(oac.digits) + "_smin" +
           std::to_string(s_min);
}

void ExperimentSpec::validate() const {
    scenario.validate();
    if (repetitions < 1) throw std::invalid_argument("experiment: repetitions must be >= 1");
    if (run_variants && variants.empty())
        throw std::invalid_argument("experiment: variant list must be nonempty");
    std::set<std::string> seen;
    for (const VariantSpec& variant : variants) {
        const std::string label = variant.resolved_label();
        if (!label_is_safe(label))
            throw std::invalid_argument("experiment: label '" + label +
                                        "' has characters unsafe for file names");
        if (!seen.insert(label).second)
            throw std::invalid_argument("experiment: duplicate variant label '" + label + "'");
    }
}

ExperimentSpec default_experiment() {
    ExperimentSpec spec;
    spec.fed.learning_rate = 0.1;
    spec.fed.alpha = 1.2;
    spec.fed.reinit_variance = 1.0;
    spec.fed.v_max_init = 300.0;
    spec.fed.rounds = 1000;

    const ChannelKind channels[] = {ChannelKind::Awgn, ChannelKind::FlatFading,
                                    ChannelKind::FreqSelective};
    const double snrs[] = {10.0, 20.0};
    const std::pair<int, int> codecs[] = {{3, 1}, {5, 1}, {3, 2}, {5, 2}};
    const int s_mins[] = {0, 5};
    for (ChannelKind channel : channels)
        for (double snr : snrs)
            for (auto [beta, digits] : codecs)
                for (int s_min : s_mins) {
                    VariantSpec variant;
                    variant.aggregation = AggregationMode::Oac;
                    variant.oac = OacConfig{beta, digits, snr, channel};
                    variant.s_min = s_min;
                    spec.variants.push_back(variant);
                }
    return spec;
}

namespace {

double snr_from_json(const ordered_json& value) {
    if (value.is_string()) {
        const std::string text = value.get<std::string>();
        if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
        return parse_double(text);
    }
    return value.get<double>();
}

void load_scenario(const ordered_json& j, ScenarioConfig& cfg) {
    if (j.contains("area_side")) cfg.area_side = j.at("area_side").get<double>();
    if (j.contains("rows")) cfg.rows = j.at("rows").get<int>();
    if (j.contains("cols")) cfg.cols = j.at("cols").get<int>();
    if (j.contains("gmm_count")) cfg.gmm_count = j.at("gmm_count").get<int>();
    if (j.contains("uniform_count")) cfg.uniform_count = j.at("uniform_count").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("components")) {
        cfg.gmm_components.clear();
        for (const ordered_json& row : j.at("components")) {
            if (!row.is_array() || row.size() != 5)
                throw std::runtime_error(
                    "config: each component must be [weight, mean_x, mean_y, std_x, std_y]");
            cfg.gmm_components.push_back({row[0].get<double>(), row[1].get<double>(),
                                          row[2].get<double>(), row[3].get<double>(),
                                          row[4].get<double>()});
        }
    }
}

VariantSpec load_variant(const ordered_json& j) {
    VariantSpec variant;
    if (j.contains("label")) variant.label = j.at("label").get<std::string>();
    if (j.contains("aggregation")) {
        const std::string mode = j.at("aggregation").get<std::string>();
        if (mode == "perfect")
            variant.aggregation = AggregationMode::Perfect;
        else if (mode == "oac")
            variant.aggregation = AggregationMode::Oac;
        else
            throw std::runtime_error("config: aggregation must be 'oac' or 'perfect'");
    }
    if (j.contains("beta")) variant.oac.beta = j.at("beta").get<int>();
    if (j.contains("digits")) variant.oac.digits = j.at("digits").get<int>();
    if (j.contains("snr_db")) variant.oac.snr_db = snr_from_json(j.at("snr_db"));
    if (j.contains("channel"))
        variant.oac.channel = parse_channel(j.at("channel").get<std::string>());
    if (j.contains("s_min")) variant.s_min = j.at("s_min").get<int>();
    return variant;
}

}  // namespace

ExperimentSpec load_experiment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    const ordered_json j = ordered_json::parse(in);

    ExperimentSpec spec = default_experiment();
    if (j.contains("seed")) spec.master_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("repetitions")) spec.repetitions = j.at("repetitions").get<int>();
    if (j.contains("out_dir")) spec.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("baseline")) spec.run_baseline = j.at("baseline").get<bool>();
    if (j.contains("rounds")) spec.fed.rounds = j.at("rounds").get<int>();
    if (j.contains("learning_rate")) spec.fed.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("alpha")) spec.fed.alpha = j.at("alpha").get<double>();
    if (j.contains("reinit_variance"))
        spec.fed.reinit_variance = j.at("reinit_variance").get<double>();
    if (j.contains("v_max_init")) spec.fed.v_max_init = j.at("v_max_init").get<double>();
    if (j.contains("scenario")) load_scenario(j.at("scenario"), spec.scenario);
    if (j.contains("variants")) {
        spec.variants.clear();
        for (const ordered_json& item : j.at("variants")) spec.variants.push_back(load_variant(item));
    }
    return spec;
}

namespace {

constexpr char kResultHeader[] = "variant,rep,round,loss,v_max,reinits,agg_error\n";

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("experiment: cannot open " + path.string() +
                                       " for writing");
    return out;
}

void write_result_row(std::ofstream& out, const std::string& label, int rep,
                      const RoundLog& log) {
    out << label << ',' << rep << ',' << log.round << ',' << format_double(log.loss) << ','
        << format_double(log.v_max) << ',' << log.reinit_count << ','
        << format_double(log.aggregation_error) << '\n';
}

void write_centroid_rows(std::ofstream& out, int rep, const CentroidSet& centroids) {
    for (std::size_t c = 0; c < centroids.count(); ++c) {
        const std::span<const double> point = centroids.centroid(c);
        out << rep << ',' << c << ',' << format_double(point[0]) << ','
            << format_double(point[1]) << '\n';
    }
}

ordered_json scenario_to_json(const ScenarioConfig& cfg) {
    ordered_json j;
    j["area_side"] = cfg.area_side;
    j["rows"] = cfg.rows;
    j["cols"] = cfg.cols;
    j["gmm_count"] = cfg.gmm_count;
    j["uniform_count"] = cfg.uniform_count;
    j["seed"] = cfg.seed;
    ordered_json components = ordered_json::array();
    for (const GaussComponent& comp : cfg.gmm_components)
        components.push_back({comp.weight, comp.mean_x, comp.mean_y, comp.std_x, comp.std_y});
    j["components"] = std::move(components);
    return j;
}

ordered_json snr_to_json(double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0.0) return "inf";
    return snr_db;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    std::filesystem::create_directories(spec.out_dir);
    const Scenario scenario = generate(spec.scenario);

    ExperimentOutput output;
    const auto emit = [&](const std::string& name) {
        output.files.push_back(spec.out_dir / name);
        return output.files.back();
    };

    save_dataset(emit("dataset.csv"), scenario);

    FedConfig base = spec.fed;
    base.num_clusters = static_cast<int>(scenario.initial_centroids.count());
    base.dim = scenario.pooled.dim;

    if (spec.run_baseline) {
        BaselineConfig baseline_cfg;
        baseline_cfg.num_clusters = base.num_clusters;
        baseline_cfg.learning_rate = 1.0;
        baseline_cfg.rounds = base.rounds;
        baseline_cfg.initial = scenario.initial_centroids;
        const BaselineResult baseline = run_baseline(baseline_cfg, scenario.pooled);

        std::ofstream results = open_output(emit("results_baseline.csv"));
        results << kResultHeader;
        for (std::size_t round = 0; round < baseline.loss_trace.size(); ++round) {
            RoundLog log;
            log.round = static_cast<int>(round);
            log.loss = baseline.loss_trace[round];
            write_result_row(results, "baseline", 0, log);
        }
        std::ofstream centroids = open_output(emit("centroids_baseline.csv"));
        centroids << "rep,cluster,x,y\n";
        write_centroid_rows(centroids, 0, baseline.final_centroids);
    }

    ordered_json manifest_variants = ordered_json::array();
    if (spec.run_variants) {
        for (std::size_t vi = 0; vi < spec.variants.size(); ++vi) {
            const VariantSpec& variant = spec.variants[vi];
            const std::string label = variant.resolved_label();
            FedConfig cfg = base;
            cfg.aggregation = variant.aggregation;
            cfg.oac = variant.oac;
            cfg.s_min = variant.s_min;
            cfg.validate();

            std::ofstream results = open_output(emit("results_" + label + ".csv"));
            results << kResultHeader;
            std::ofstream centroids = open_output(emit("centroids_" + label + ".csv"));
            centroids << "rep,cluster,x,y\n";

            ordered_json entry;
            entry["label"] = label;
            entry["aggregation"] =
                variant.aggregation == AggregationMode::Perfect ? "perfect" : "oac";
            entry["s_min"] = variant.s_min;
            if (variant.aggregation == AggregationMode::Oac) {
                entry["beta"] = variant.oac.beta;
                entry["digits"] = variant.oac.digits;
                entry["snr_db"] = snr_to_json(variant.oac.snr_db);
                entry["channel"] = channel_name(variant.oac.channel);
                const CodecConfig codec{variant.oac.beta, variant.oac.digits, 1.0};
                PhyConfig phy;
                phy.codec = codec;
                phy.num_values = cfg.num_clusters * cfg.dim;
                phy.snr_db = variant.oac.snr_db;
                entry["xi"] = codec.xi();
                entry["noise_variance"] = phy.noise_variance();
                entry["symbol_energy"] = phy.symbol_energy();
                entry["grid_size"] = phy.grid_size();
            }
            ordered_json run_seeds = ordered_json::array();

            for (int rep = 0; rep < spec.repetitions; ++rep) {
                const std::uint64_t run_seed =
                    derive_seed(spec.master_seed, stream::kRun, vi, static_cast<std::uint64_t>(rep));
                run_seeds.push_back(run_seed);
                const RunResult result =
                    run(cfg, scenario.ed_datasets, scenario.initial_centroids, run_seed);
                for (const RoundLog& log : result.rounds)
                    write_result_row(results, label, rep, log);
                write_centroid_rows(centroids, rep, result.final_centroids);
            }
            entry["run_seeds"] = std::move(run_seeds);
            manifest_variants.push_back(std::move(entry));
        }
    }

    ordered_json manifest;
    manifest["master_seed"] = spec.master_seed;
    manifest["repetitions"] = spec.repetitions;
    manifest["rounds"] = spec.fed.rounds;
    manifest["learning_rate"] = spec.fed.learning_rate;
    manifest["alpha"] = spec.fed.alpha;
    manifest["reinit_variance"] = spec.fed.reinit_variance;
    manifest["v_max_init"] = spec.fed.v_max_init;
    manifest["num_clusters"] = base.num_clusters;
    manifest["dim"] = base.dim;
    manifest["num_eds"] = scenario.grid.count();
    manifest["scenario"] = scenario_to_json(spec.scenario);
    manifest["baseline"] = ordered_json{{"included", spec.run_baseline},
                                        {"learning_rate", 1.0},
                                        {"rounds", spec.fed.rounds}};
    manifest["variants"] = std::move(manifest_variants);
    ordered_json names = ordered_json::array();
    for (const std::filesystem::path& file : output.files)
        names.push_back(file.filename().string());
    names.push_back("manifest.json");
    manifest["files"] = std::move(names);

    std::ofstream manifest_out = open_output(emit("manifest.json"));
    manifest_out << manifest.dump(2) << '\n';
    return output;
}

void ResourceConfig::validate() const {
    if (dim < 1 || clusters < 1 || eds < 1)
        throw std::invalid_argument("resources: dim, clusters, and eds must be >= 1");
    if (beta < 1 || digits < 1)
        throw std::invalid_argument("resources: beta and digits must be >= 1");
    if (compression_num < 1 || compression_den < 1)
        throw std::invalid_argument("resources: compression ratio must be positive");
    if (n_bits < 1 || r_bits < 1)
        throw std::invalid_argument("resources: n_bits and r_bits must be >= 1");
}

ResourceReport resource_report(const ResourceConfig& cfg) {
    cfg.validate();
    ResourceReport report;
    report.oac = static_cast<double>(static_cast<std::int64_t>(cfg.dim) * cfg.clusters *
                                     cfg.beta * cfg.digits);
    // Keep the digital-baseline count exact whenever the ratio divides evenly.
    const std::int64_t numerator = static_cast<std::int64_t>(cfg.dim) * cfg.clusters * cfg.eds *
                                   cfg.n_bits * cfg.compression_num;
    const std::int64_t denominator = cfg.compression_den * cfg.r_bits;
    if (numerator % denominator == 0)
        report.non_oac = static_cast<double>(numerator / denominator);
    else
        report.non_oac = static_cast<double>(numerator) / static_cast<double>(denominator);
    return report;
}

std::pair<std::int64_t, std::int64_t> parse_fraction(std::string_view text) {
    const std::size_t slash = text.find('/');
    if (slash == std::string_view::npos) return {parse_int(text), 1};
    const std::int64_t num = parse_int(text.substr(0, slash));
    const std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("fraction: zero denominator");
    return {num, den};
}

}  // namespace fedkm
