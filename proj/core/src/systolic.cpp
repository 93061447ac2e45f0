#include "edgepipe/systolic.hpp"

#include <limits>
#include <stdexcept>

namespace edgepipe {

namespace {

void validate(const SystolicArrayConfig& config, const MatVecJob& job) {
    if (config.rows < 1 || config.cols < 1 || config.clock_hz <= 0.0)
        throw std::invalid_argument("SystolicArrayConfig: rows, cols >= 1 and clock > 0");
    if (job.m < 1 || job.k < 1 || job.b < 1)
        throw std::invalid_argument("MatVecJob: m, k, b must be >= 1");
    if (job.weights.size() != job.m * job.k)
        throw std::invalid_argument("MatVecJob: weights size != m*k");
    if (job.inputs.size() != job.b * job.k)
        throw std::invalid_argument("MatVecJob: inputs size != b*k");
}

}  // namespace

std::uint64_t matvec_cycles(const SystolicArrayConfig& config, std::uint64_t m,
                            std::uint64_t k, std::uint64_t b) {
    const std::uint64_t rows = config.rows;
    const std::uint64_t cols = config.cols;
    const std::uint64_t fragments = (k + cols - 1) / cols;
    const std::uint64_t passes = b * fragments;  // pipelined injections per tile

    std::uint64_t total = 0;
    for (std::uint64_t tile = 0; tile < m; tile += rows) {
        const std::uint64_t rows_used = std::min(rows, m - tile);
        total += rows_used + cols - 1 + (passes - 1);
    }
    return total;
}

MatVecResult simulate_matvec(const SystolicArrayConfig& config, const MatVecJob& job) {
    validate(config, job);

    MatVecResult result;
    result.outputs.assign(job.m * job.b, 0);
    for (std::uint64_t i = 0; i < job.m; ++i) {
        for (std::uint64_t v = 0; v < job.b; ++v) {
            std::int64_t acc = 0;
            for (std::uint64_t c = 0; c < job.k; ++c) {
                acc += static_cast<std::int64_t>(job.weights[i * job.k + c]) *
                       static_cast<std::int64_t>(job.inputs[v * job.k + c]);
            }
            if (acc > std::numeric_limits<std::int32_t>::max() ||
                acc < std::numeric_limits<std::int32_t>::min())
                throw std::overflow_error("simulate_matvec: 32-bit accumulator overflow");
            result.outputs[i * job.b + v] = static_cast<std::int32_t>(acc);
        }
    }

    CycleReport& report = result.report;
    report.total_cycles = matvec_cycles(config, job.m, job.k, job.b);
    report.mac_ops = job.m * job.k * job.b;
    report.utilization =
        static_cast<double>(report.mac_ops) /
        (static_cast<double>(report.total_cycles) * config.rows * config.cols);
    report.wall_time_s = static_cast<double>(report.total_cycles) / config.clock_hz;
    return result;
}

double peak_ops_per_second(const SystolicArrayConfig& config) {
    if (config.rows < 1 || config.cols < 1 || config.clock_hz <= 0.0)
        throw std::invalid_argument("SystolicArrayConfig: rows, cols >= 1 and clock > 0");
    return static_cast<double>(config.rows) * config.cols * 2.0 * config.clock_hz;
}

double steady_state_throughput(const SystolicArrayConfig& config, const MatVecJob& job) {
    validate(config, job);
    const std::uint64_t cycles = matvec_cycles(config, job.m, job.k, job.b);
    return static_cast<double>(job.m * job.k * job.b) / static_cast<double>(cycles);
}

}  // namespace edgepipe
