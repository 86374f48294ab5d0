// Command-line driver: run experiment sweeps, report channel-use counts, and
// generate datasets. All heavy lifting lives in the fedkm library; this file
// only maps flags onto the library's config structs.

#include <cstdint>
#include <exception>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"

#include "fedkm/experiment.hpp"
#include "fedkm/scenario.hpp"
#include "fedkm/text.hpp"

namespace {

double parse_snr_text(const std::string& text) {
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    return fedkm::parse_double(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Federated k-means with over-the-air aggregation: simulation driver"};
    app.require_subcommand(1);

    CLI::App* run_cmd =
        app.add_subcommand("run", "Run an experiment (centralized baseline + uplink variants)");
    std::string config_path;
    std::uint64_t seed = 0;
    int rounds = 0;
    int beta = 5;
    int digits = 2;
    std::string snr_text = "20";
    std::string channel_text = "awgn";
    int s_min = 5;
    double mu = 0.1;
    double alpha = 1.2;
    bool perfect = false;
    bool baseline_only = false;
    int reps = 1;
    std::string out_dir = "out";
    run_cmd->add_option("--config", config_path, "JSON experiment config file");
    run_cmd->add_option("--seed", seed, "Master seed");
    run_cmd->add_option("--rounds", rounds, "Communication rounds");
    run_cmd->add_option("--beta", beta, "Numeral base (odd, >= 3)");
    run_cmd->add_option("--digits", digits, "Digits per encoded value");
    run_cmd->add_option("--snr-db", snr_text, "Receive SNR in dB, or 'inf' for noiseless");
    run_cmd->add_option("--channel", channel_text, "Channel kind: awgn | flat | selective");
    run_cmd->add_option("--smin", s_min, "Re-initialization cardinality threshold");
    run_cmd->add_option("--mu", mu, "Learning rate");
    run_cmd->add_option("--alpha", alpha, "Clamping-range adaptation gain");
    run_cmd->add_flag("--perfect-aggregation", perfect,
                      "Bypass the channel and sum updates exactly");
    run_cmd->add_flag("--baseline-only", baseline_only, "Run only the centralized baseline");
    run_cmd->add_option("--reps", reps, "Monte-Carlo repetitions per variant");
    run_cmd->add_option("--out", out_dir, "Output directory");

    CLI::App* res_cmd =
        app.add_subcommand("resources", "Report per-round channel-use counts for a config");
    fedkm::ResourceConfig res_cfg;
    std::string compression_text = "1/5";
    res_cmd->add_option("--dim", res_cfg.dim, "Values per centroid (L)");
    res_cmd->add_option("--clusters", res_cfg.clusters, "Number of centroids (C)");
    res_cmd->add_option("--eds", res_cfg.eds, "Number of devices (K)");
    res_cmd->add_option("--beta", res_cfg.beta, "Numeral base");
    res_cmd->add_option("--digits", res_cfg.digits, "Digits per encoded value");
    res_cmd->add_option("--compression", compression_text,
                        "Digital-baseline compression ratio, e.g. 1/5");
    res_cmd->add_option("--n-bits", res_cfg.n_bits, "Bits per value before compression");
    res_cmd->add_option("--r-bits", res_cfg.r_bits, "Bits carried per channel resource");

    CLI::App* scen_cmd = app.add_subcommand("scenario", "Generate a dataset and save it");
    fedkm::ScenarioConfig scen_cfg;
    std::string dataset_path = "dataset.csv";
    scen_cmd->add_option("--seed", scen_cfg.seed, "Scenario seed");
    scen_cmd->add_option("--rows", scen_cfg.rows, "Tile rows");
    scen_cmd->add_option("--cols", scen_cfg.cols, "Tile columns");
    scen_cmd->add_option("--area-side", scen_cfg.area_side, "Area side length in meters");
    scen_cmd->add_option("--gmm-count", scen_cfg.gmm_count, "Mixture point count");
    scen_cmd->add_option("--uniform-count", scen_cfg.uniform_count, "Uniform point count");
    scen_cmd->add_option("--out", dataset_path, "Output dataset file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            fedkm::ExperimentSpec spec = config_path.empty()
                                             ? fedkm::default_experiment()
                                             : fedkm::load_experiment(config_path);
            if (run_cmd->count("--seed") > 0) spec.master_seed = seed;
            if (run_cmd->count("--rounds") > 0) spec.fed.rounds = rounds;
            if (run_cmd->count("--mu") > 0) spec.fed.learning_rate = mu;
            if (run_cmd->count("--alpha") > 0) spec.fed.alpha = alpha;
            if (run_cmd->count("--reps") > 0) spec.repetitions = reps;
            if (run_cmd->count("--out") > 0) spec.out_dir = out_dir;

            // Any uplink flag collapses the sweep to that single variant.
            const bool single_variant =
                run_cmd->count("--beta") > 0 || run_cmd->count("--digits") > 0 ||
                run_cmd->count("--snr-db") > 0 || run_cmd->count("--channel") > 0 ||
                run_cmd->count("--smin") > 0 || perfect;
            if (single_variant) {
                fedkm::VariantSpec variant;
                variant.aggregation =
                    perfect ? fedkm::AggregationMode::Perfect : fedkm::AggregationMode::Oac;
                variant.oac.beta = beta;
                variant.oac.digits = digits;
                variant.oac.snr_db = parse_snr_text(snr_text);
                variant.oac.channel = fedkm::parse_channel(channel_text);
                variant.s_min = s_min;
                spec.variants = {variant};
            }
            if (baseline_only) {
                spec.run_variants = false;
                spec.variants.clear();
            }

            const fedkm::ExperimentOutput output = fedkm::run_experiment(spec);
            std::cout << "wrote " << output.files.size() << " files to "
                      << spec.out_dir.string() << '\n';
        } else if (res_cmd->parsed()) {
            const auto [num, den] = fedkm::parse_fraction(compression_text);
            res_cfg.compression_num = num;
            res_cfg.compression_den = den;
            const fedkm::ResourceReport report = fedkm::resource_report(res_cfg);
            std::cout << "oac_resources=" << fedkm::format_double(report.oac) << '\n'
                      << "non_oac_resources=" << fedkm::format_double(report.non_oac) << '\n';
        } else if (scen_cmd->parsed()) {
            const fedkm::Scenario scenario = fedkm::generate(scen_cfg);
            fedkm::save_dataset(dataset_path, scenario);
            std::cout << "wrote " << scenario.pooled.size() << " points to " << dataset_path
                      << '\n';
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
