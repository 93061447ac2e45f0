// Command-line harness: single-device sweeps, segmented pipeline sweeps,
// partition profiling, profile calibration, and the systolic-array simulator.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "edgepipe/experiment.hpp"
#include "edgepipe/serialize.hpp"

namespace fs = std::filesystem;
using namespace edgepipe;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitArgError = 1;
constexpr int kExitIoError = 2;

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::string partitioner = "even";
    std::string batches = "1,50";
    std::string segments = "1,2,3,4";
    std::string sweep_kind = "fc";

    // Which flags were given explicitly; only those override a --config file.
    bool have_out = false, have_seed = false, have_partitioner = false;
    bool have_batches = false, have_segments = false;
};

std::vector<std::uint32_t> parse_list(const std::string& text) {
    std::vector<std::uint32_t> values;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        values.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
    if (values.empty()) throw std::invalid_argument("empty list: '" + text + "'");
    return values;
}

ExperimentConfig load_config(const CliOptions& options) {
    ExperimentConfig config;
    const bool from_file = !options.config_path.empty();
    if (from_file) {
        std::ifstream in(options.config_path);
        if (!in) throw std::ios_base::failure("cannot open config: " + options.config_path);
        nlohmann::json j;
        in >> j;
        config = j.get<ExperimentConfig>();
    } else {
        config.sweep =
            options.sweep_kind == "conv" ? default_conv_sweep() : default_fc_sweep();
    }
    if (options.have_out || !from_file) config.out_dir = options.out_dir;
    if (options.have_seed || !from_file) config.seed = options.seed;
    if (options.have_batches || !from_file) config.batches = parse_list(options.batches);
    if (options.have_segments || !from_file) config.segments = parse_list(options.segments);

    if (options.have_partitioner || !from_file) {
        const std::string& p = options.partitioner;
        if (p == "even") {
            config.partitioner.kind = PartitionerKind::Even;
        } else if (p == "exhaustive") {
            config.partitioner.kind = PartitionerKind::Exhaustive;
        } else if (p.rfind("threshold=", 0) == 0) {
            config.partitioner.kind = PartitionerKind::Threshold;
            config.partitioner.max_diff_s = std::stod(p.substr(10));
        } else {
            throw std::invalid_argument(
                "unknown partitioner '" + p + "' (expected even|threshold=<sec>|exhaustive)");
        }
    }
    return config;
}

std::ofstream open_output(const fs::path& path) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot write " + path.string());
    return out;
}

const char* kind_name(const SweepConfig& sweep) {
    return sweep.kind == SweepKind::FC ? "fc" : "conv";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge accelerator inference sweeps, segmentation, and pipeline simulation"};
    app.require_subcommand(1);

    CliOptions options;
    app.add_option("--config", options.config_path, "Experiment config JSON");
    auto* opt_out = app.add_option("--out", options.out_dir, "Output directory");
    auto* opt_seed = app.add_option("--seed", options.seed, "RNG seed")->default_val(0);
    auto* opt_part = app.add_option("--partitioner", options.partitioner,
                                    "even | threshold=<sec> | exhaustive");
    auto* opt_batches = app.add_option("--batches", options.batches, "Comma-separated batch sizes");
    auto* opt_segments =
        app.add_option("--segments", options.segments, "Comma-separated segment counts");
    app.add_option("--sweep", options.sweep_kind, "fc | conv (ignored when --config is given)")
        ->check(CLI::IsMember({"fc", "conv"}));

    auto* cmd_sweep = app.add_subcommand("sweep", "Single-device latency sweep -> CSV");
    auto* cmd_segment =
        app.add_subcommand("segment", "Segmented pipeline sweep over devices/batches -> CSV");

    auto* cmd_profile = app.add_subcommand("profile", "Rank all partitions of one model -> JSON");
    std::string profile_model;
    std::uint32_t profile_segments = 2;
    cmd_profile->add_option("model_id", profile_model, "Model id, e.g. fc_n2640")->required();
    cmd_profile->add_option("segments", profile_segments, "Segment count")->required();

    auto* cmd_calibrate =
        app.add_subcommand("calibrate", "Fit profile knobs to a measured param,time_s CSV");
    std::string measured_path;
    cmd_calibrate->add_option("measured_csv", measured_path, "Measured sweep CSV")->required();

    auto* cmd_systolic = app.add_subcommand("systolic", "Simulate one matvec job -> JSON report");
    std::uint32_t sys_rows = 64, sys_cols = 64;
    double sys_clock = 480e6;
    std::uint64_t sys_m = 64, sys_k = 64, sys_b = 1;
    cmd_systolic->add_option("rows", sys_rows)->required();
    cmd_systolic->add_option("cols", sys_cols)->required();
    cmd_systolic->add_option("clock_hz", sys_clock)->required();
    cmd_systolic->add_option("m", sys_m, "Weight matrix rows (default 64)");
    cmd_systolic->add_option("k", sys_k, "Weight matrix cols (default 64)");
    cmd_systolic->add_option("b", sys_b, "Batch size (default 1)");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitArgError;
    }
    options.have_out = opt_out->count() > 0;
    options.have_seed = opt_seed->count() > 0;
    options.have_partitioner = opt_part->count() > 0;
    options.have_batches = opt_batches->count() > 0;
    options.have_segments = opt_segments->count() > 0;

    try {
        const ExperimentConfig config = load_config(options);

        if (cmd_sweep->parsed()) {
            const auto rows = run_sweep(config);
            const fs::path path =
                fs::path(config.out_dir) / ("sweep_" + std::string(kind_name(config.sweep)) +
                                            ".csv");
            auto out = open_output(path);
            write_sweep_csv(out, rows);
            std::cout << "wrote " << rows.size() << " rows to " << path.string() << "\n";
        } else if (cmd_segment->parsed()) {
            const auto rows = run_segment(config);
            const fs::path path =
                fs::path(config.out_dir) / ("segment_" + std::string(kind_name(config.sweep)) +
                                            ".csv");
            auto out = open_output(path);
            write_segment_csv(out, rows);
            std::cout << "wrote " << rows.size() << " rows to " << path.string() << "\n";
        } else if (cmd_profile->parsed()) {
            const nlohmann::json report = run_profile(config, profile_model, profile_segments);
            const fs::path path =
                fs::path(config.out_dir) /
                ("profile_" + profile_model + "_s" + std::to_string(profile_segments) + ".json");
            auto out = open_output(path);
            out << report.dump(2) << "\n";
            std::cout << "wrote " << path.string() << "\n";
        } else if (cmd_calibrate->parsed()) {
            std::ifstream in(measured_path);
            if (!in) throw std::ios_base::failure("cannot open " + measured_path);
            const auto measured = read_measured_csv(in);
            const CalibrationResult fit = calibrate(measured, config);
            if (fit.degenerate)
                std::cerr << "warning: constant measured times, fit is unconstrained\n";
            nlohmann::json j{{"profile", fit.profile},
                             {"sse_log", fit.sse_log},
                             {"degenerate", fit.degenerate},
                             {"residuals", fit.residuals}};
            std::cout << j.dump(2) << "\n";
        } else if (cmd_systolic->parsed()) {
            std::cout << systolic_report(sys_rows, sys_cols, sys_clock, sys_m, sys_k, sys_b,
                                         options.seed)
                             .dump(2)
                      << "\n";
        }
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitArgError;
    }
    return kExitOk;
}
