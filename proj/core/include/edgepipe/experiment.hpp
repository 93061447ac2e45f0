#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgepipe/device.hpp"
#include "edgepipe/model.hpp"
#include "edgepipe/partition.hpp"

namespace edgepipe {

enum class PartitionerKind { Even, Threshold, Exhaustive };

struct PartitionerChoice {
    PartitionerKind kind = PartitionerKind::Even;
    double max_diff_s = 0.0;  // Threshold only
};

struct ExperimentConfig {
    SweepConfig sweep;
    AcceleratorProfile profile;
    std::vector<std::uint32_t> segments = {1, 2, 3, 4};
    std::vector<std::uint32_t> batches = {1, 50};
    PartitionerChoice partitioner;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::uint64_t enumeration_budget = 1'000'000;
};

void to_json(nlohmann::json& j, const ExperimentConfig& config);
void from_json(const nlohmann::json& j, ExperimentConfig& config);

// ---- sweep: single-device latency over a model family ----

struct SweepRow {
    std::string model_id;
    std::uint64_t param = 0;
    std::uint64_t macs = 0;
    std::uint64_t weight_bytes = 0;
    std::uint64_t on_chip_bytes = 0;
    std::uint64_t host_bytes = 0;
    std::uint32_t host_layers = 0;
    double time_s = 0.0;
    double gops = 0.0;  // macs / time_s / 1e9
};

std::vector<SweepRow> run_sweep(const ExperimentConfig& config);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// ---- segment: pipelined multi-device sweep ----

struct SegmentRow {
    std::string model_id;
    std::uint64_t param = 0;
    std::uint32_t segments = 1;
    std::string partition;  // "1-2-2"
    std::uint32_t batch = 1;
    double per_inference_s = 0.0;
    double makespan_s = 0.0;
    bool fully_on_chip = false;
    double speedup_vs_b1 = 1.0;
    double speedup_vs_1tpu = 1.0;
};

std::vector<SegmentRow> run_segment(const ExperimentConfig& config);
void write_segment_csv(std::ostream& out, const std::vector<SegmentRow>& rows);

// ---- profile: every partition of one model, ranked ----

// All partitions of `model_id` into `segments` segments, sorted by batch
// makespan, with the even-split and threshold picks marked.
nlohmann::json run_profile(const ExperimentConfig& config, const std::string& model_id,
                           std::uint32_t segments);

// ---- calibrate: fit profile knobs to measured sweep times ----

struct Measurement {
    std::uint64_t param = 0;
    double time_s = 0.0;
};

// Parses `param,time_s` CSV (header optional). Throws std::runtime_error with
// the offending line number on malformed input.
std::vector<Measurement> read_measured_csv(std::istream& in);

struct CalibrationResult {
    AcceleratorProfile profile;
    double sse_log = 0.0;  // sum of squared log-errors at the optimum
    bool degenerate = false;  // constant measurements: the fit is unconstrained
    std::vector<double> residuals;  // log(predicted) - log(measured), per point

    // The searched axes, exposed so callers can reason about grid resolution.
    static const std::vector<double>& bandwidth_grid();
    static const std::vector<double>& pcie_bw_grid();
    static const std::vector<double>& pcie_latency_grid();
    static const std::vector<std::uint64_t>& reserved_grid();
};

// Grid search over (effective_onchip_bw, pcie_bw, pcie_latency, reserved_bytes)
// minimizing sum of squared log-error of predicted vs measured single-device
// times. Needs at least two measurements.
CalibrationResult calibrate(const std::vector<Measurement>& measured,
                            const ExperimentConfig& config);

// ---- systolic: one matvec job on random int8 data ----

nlohmann::json systolic_report(std::uint32_t rows, std::uint32_t cols, double clock_hz,
                               std::uint64_t m, std::uint64_t k, std::uint64_t b,
                               std::uint64_t seed);

}  // namespace edgepipe
