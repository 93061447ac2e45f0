#include "edgepipe/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "edgepipe/serialize.hpp"
#include "edgepipe/systolic.hpp"

namespace edgepipe {

using nlohmann::json;

void to_json(json& j, const ExperimentConfig& config) {
    const char* kind = "even";
    if (config.partitioner.kind == PartitionerKind::Threshold) kind = "threshold";
    if (config.partitioner.kind == PartitionerKind::Exhaustive) kind = "exhaustive";
    j = json{{"sweep", config.sweep},
             {"profile", config.profile},
             {"segments", config.segments},
             {"batches", config.batches},
             {"partitioner", json{{"kind", kind}, {"max_diff_s", config.partitioner.max_diff_s}}},
             {"out_dir", config.out_dir},
             {"seed", config.seed},
             {"enumeration_budget", config.enumeration_budget}};
}

void from_json(const json& j, ExperimentConfig& config) {
    ExperimentConfig defaults;
    if (j.contains("sweep")) config.sweep = j.at("sweep").get<SweepConfig>();
    if (j.contains("profile")) config.profile = j.at("profile").get<AcceleratorProfile>();
    config.segments = j.value("segments", defaults.segments);
    config.batches = j.value("batches", defaults.batches);
    if (j.contains("partitioner")) {
        const auto& p = j.at("partitioner");
        const auto kind = p.value("kind", std::string{"even"});
        if (kind == "even")
            config.partitioner.kind = PartitionerKind::Even;
        else if (kind == "threshold")
            config.partitioner.kind = PartitionerKind::Threshold;
        else if (kind == "exhaustive")
            config.partitioner.kind = PartitionerKind::Exhaustive;
        else
            throw std::invalid_argument("ExperimentConfig: unknown partitioner '" + kind + "'");
        config.partitioner.max_diff_s = p.value("max_diff_s", 0.0);
    }
    config.out_dir = j.value("out_dir", defaults.out_dir);
    config.seed = j.value("seed", defaults.seed);
    config.enumeration_budget = j.value("enumeration_budget", defaults.enumeration_budget);
}

namespace {

std::vector<std::uint64_t> sweep_params(const SweepConfig& sweep) {
    std::vector<std::uint64_t> params;
    for (std::uint64_t p = sweep.param_min; p <= sweep.param_max; p += sweep.param_step)
        params.push_back(p);
    return params;
}

ModelSpec build_model(const SweepConfig& sweep, std::uint64_t param) {
    return sweep.kind == SweepKind::FC ? build_fc_model(sweep, param)
                                       : build_conv_model(sweep, param);
}

std::ostream& csv_precision(std::ostream& out) {
    out << std::setprecision(17);
    return out;
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
    std::vector<SweepRow> rows;
    for (const std::uint64_t param : sweep_params(config.sweep)) {
        const ModelSpec model = build_model(config.sweep, param);
        const Placement placement =
            allocate_layers(model.layers, config.profile, model.bytes_per_weight);
        const StageCost cost =
            stage_cost(model.layers, placement, config.profile, model.bytes_per_weight);

        SweepRow row;
        row.model_id = model.id;
        row.param = param;
        row.macs = model_macs(model);
        row.weight_bytes = model_weight_bytes(model);
        row.on_chip_bytes = placement.on_chip_used_bytes;
        row.host_bytes = placement.host_bytes;
        row.host_layers = placement.host_layers();
        row.time_s = cost.total_s();
        row.gops = static_cast<double>(row.macs) / row.time_s / 1e9;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    csv_precision(out);
    out << "model_id,param,macs,weight_bytes,on_chip_bytes,host_bytes,host_layers,time_s,gops\n";
    for (const auto& r : rows) {
        out << r.model_id << ',' << r.param << ',' << r.macs << ',' << r.weight_bytes << ','
            << r.on_chip_bytes << ',' << r.host_bytes << ',' << r.host_layers << ',' << r.time_s
            << ',' << r.gops << '\n';
    }
}

namespace {

PartitionEvaluation pick_partition(const ExperimentConfig& config, const ModelSpec& model,
                                   std::uint32_t segments,
                                   std::span<const AcceleratorProfile> profiles,
                                   std::uint32_t batch) {
    switch (config.partitioner.kind) {
        case PartitionerKind::Even:
            return evaluate_partition(
                model, even_split(static_cast<std::uint32_t>(model.layers.size()), segments),
                profiles, batch);
        case PartitionerKind::Threshold:
            return threshold_partition(model, segments, profiles, batch,
                                       config.partitioner.max_diff_s);
        case PartitionerKind::Exhaustive:
            return exhaustive_best(model, segments, profiles, batch,
                                   config.enumeration_budget);
    }
    throw std::invalid_argument("pick_partition: unknown partitioner");
}

}  // namespace

std::vector<SegmentRow> run_segment(const ExperimentConfig& config) {
    std::vector<SegmentRow> rows;
    for (const std::uint64_t param : sweep_params(config.sweep)) {
        const ModelSpec model = build_model(config.sweep, param);
        const StageCost single = single_device_time(model, config.profile);

        for (const std::uint32_t s : config.segments) {
            if (s < 1 || s > model.layers.size()) continue;
            const std::vector<AcceleratorProfile> profiles(s, config.profile);
            for (const std::uint32_t batch : config.batches) {
                const PartitionEvaluation evaluation =
                    pick_partition(config, model, s, profiles, batch);
                const double per_inference =
                    evaluation.batch_makespan_s / static_cast<double>(batch);
                const double b1_makespan =
                    batch == 1 ? evaluation.batch_makespan_s
                               : evaluate_partition(model, evaluation.partition, profiles, 1)
                                     .batch_makespan_s;

                SegmentRow row;
                row.model_id = model.id;
                row.param = param;
                row.segments = s;
                row.partition = evaluation.partition.dashed();
                row.batch = batch;
                row.per_inference_s = per_inference;
                row.makespan_s = evaluation.batch_makespan_s;
                row.fully_on_chip = evaluation.fully_on_chip;
                row.speedup_vs_b1 = b1_makespan / per_inference;
                row.speedup_vs_1tpu = single.total_s() / per_inference;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

void write_segment_csv(std::ostream& out, const std::vector<SegmentRow>& rows) {
    csv_precision(out);
    out << "model_id,param,s,partition,batch,per_inference_s,makespan_s,fully_on_chip,"
           "speedup_vs_b1,speedup_vs_1tpu\n";
    for (const auto& r : rows) {
        out << r.model_id << ',' << r.param << ',' << r.segments << ',' << r.partition << ','
            << r.batch << ',' << r.per_inference_s << ',' << r.makespan_s << ','
            << (r.fully_on_chip ? 1 : 0) << ',' << r.speedup_vs_b1 << ',' << r.speedup_vs_1tpu
            << '\n';
    }
}

json run_profile(const ExperimentConfig& config, const std::string& model_id,
                 std::uint32_t segments) {
    ModelSpec model;
    bool found = false;
    for (const std::uint64_t param : sweep_params(config.sweep)) {
        ModelSpec candidate = build_model(config.sweep, param);
        if (candidate.id == model_id) {
            model = std::move(candidate);
            found = true;
            break;
        }
    }
    if (!found)
        throw std::invalid_argument("run_profile: model '" + model_id + "' not in the sweep");
    const auto layers = static_cast<std::uint32_t>(model.layers.size());
    if (segments < 1 || segments > layers)
        throw std::invalid_argument("run_profile: need 1 <= segments <= layer count");
    if (count_partitions(layers, segments) > config.enumeration_budget)
        throw EnumerationBudgetError("run_profile: partition count exceeds the budget");

    const std::uint32_t batch =
        *std::max_element(config.batches.begin(), config.batches.end());
    const std::vector<AcceleratorProfile> profiles(segments, config.profile);

    const Partition even = even_split(layers, segments);
    const PartitionEvaluation threshold_pick = threshold_partition(
        model, segments, profiles, batch, config.partitioner.max_diff_s);

    json entries = json::array();
    for (const auto& partition : enumerate_partitions(layers, segments)) {
        json entry = evaluate_partition(model, partition, profiles, batch);
        entry["is_even_split"] = partition.sizes == even.sizes;
        entry["is_threshold_pick"] = partition.sizes == threshold_pick.partition.sizes;
        entries.push_back(std::move(entry));
    }
    std::stable_sort(entries.begin(), entries.end(), [](const json& a, const json& b) {
        return a.at("batch_makespan_s").get<double>() < b.at("batch_makespan_s").get<double>();
    });
    return json{{"model_id", model_id},
                {"segments", segments},
                {"batch", batch},
                {"partitions", std::move(entries)}};
}

std::vector<Measurement> read_measured_csv(std::istream& in) {
    std::vector<Measurement> measured;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.find("param") != std::string::npos) continue;  // header
        std::istringstream fields(line);
        Measurement m;
        char comma = 0;
        if (!(fields >> m.param >> comma >> m.time_s) || comma != ',' || m.time_s <= 0.0)
            throw std::runtime_error("measured CSV: parse error at line " +
                                     std::to_string(line_no));
        measured.push_back(m);
    }
    return measured;
}

const std::vector<double>& CalibrationResult::bandwidth_grid() {
    static const std::vector<double> grid = {1e9, 2e9, 3e9, 4e9, 6e9};
    return grid;
}
const std::vector<double>& CalibrationResult::pcie_bw_grid() {
    static const std::vector<double> grid = {1e8, 2e8, 4e8, 8e8};
    return grid;
}
const std::vector<double>& CalibrationResult::pcie_latency_grid() {
    static const std::vector<double> grid = {0.0, 5e-5, 1e-4, 2e-4, 4e-4};
    return grid;
}
const std::vector<std::uint64_t>& CalibrationResult::reserved_grid() {
    static const std::vector<std::uint64_t> grid = {0, 512 * 1024, 1024 * 1024,
                                                    1536 * 1024, 2048 * 1024};
    return grid;
}

CalibrationResult calibrate(const std::vector<Measurement>& measured,
                            const ExperimentConfig& config) {
    if (measured.size() < 2)
        throw std::invalid_argument("calibrate: need at least two measurements");

    std::vector<ModelSpec> models;
    models.reserve(measured.size());
    for (const auto& m : measured) models.push_back(build_model(config.sweep, m.param));

    CalibrationResult best;
    double best_sse = std::numeric_limits<double>::infinity();
    for (const double bw : CalibrationResult::bandwidth_grid()) {
        for (const double pcie : CalibrationResult::pcie_bw_grid()) {
            for (const double latency : CalibrationResult::pcie_latency_grid()) {
                for (const std::uint64_t reserved : CalibrationResult::reserved_grid()) {
                    AcceleratorProfile candidate = config.profile;
                    candidate.effective_onchip_bw_bytes_per_s = bw;
                    candidate.pcie_bw_bytes_per_s = pcie;
                    candidate.pcie_latency_s = latency;
                    candidate.reserved_bytes = reserved;

                    double sse = 0.0;
                    for (std::size_t i = 0; i < measured.size(); ++i) {
                        const double predicted =
                            single_device_time(models[i], candidate).total_s();
                        const double err = std::log(predicted) - std::log(measured[i].time_s);
                        sse += err * err;
                    }
                    if (sse < best_sse) {
                        best_sse = sse;
                        best.profile = candidate;
                    }
                }
            }
        }
    }

    best.sse_log = best_sse;
    best.residuals.clear();
    for (std::size_t i = 0; i < measured.size(); ++i) {
        const double predicted = single_device_time(models[i], best.profile).total_s();
        best.residuals.push_back(std::log(predicted) - std::log(measured[i].time_s));
    }
    best.degenerate = std::all_of(measured.begin(), measured.end(), [&](const Measurement& m) {
        return m.time_s == measured.front().time_s;
    });
    return best;
}

json systolic_report(std::uint32_t rows, std::uint32_t cols, double clock_hz, std::uint64_t m,
                     std::uint64_t k, std::uint64_t b, std::uint64_t seed) {
    SystolicArrayConfig config{rows, cols, clock_hz};

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-128, 127);
    MatVecJob job;
    job.m = m;
    job.k = k;
    job.b = b;
    job.weights.resize(m * k);
    job.inputs.resize(b * k);
    for (auto& w : job.weights) w = static_cast<std::int8_t>(dist(rng));
    for (auto& x : job.inputs) x = static_cast<std::int8_t>(dist(rng));

    const MatVecResult result = simulate_matvec(config, job);
    return json{{"rows", rows},
                {"cols", cols},
                {"clock_hz", clock_hz},
                {"m", m},
                {"k", k},
                {"batch", b},
                {"seed", seed},
                {"peak_ops_per_second", peak_ops_per_second(config)},
                {"report", result.report}};
}

}  // namespace edgepipe
