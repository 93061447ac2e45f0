#pragma once

#include <cstdint>
#include <vector>

namespace edgepipe {

// R x C grid of multiply-sum cells. Each row is one chain computing a dot
// product via forwarded partial sums; registers between cells let successive
// inputs pipeline through at one per cycle.
struct SystolicArrayConfig {
    std::uint32_t rows = 64;
    std::uint32_t cols = 64;
    double clock_hz = 480e6;
};

// Batched matrix-vector job: an M x K weight matrix applied to B length-K
// input vectors. Elements must fit in signed 8 bits.
struct MatVecJob {
    std::uint64_t m = 0;
    std::uint64_t k = 0;
    std::uint64_t b = 0;
    std::vector<std::int8_t> weights;  // row-major, m*k
    std::vector<std::int8_t> inputs;   // row-major, b*k
};

struct CycleReport {
    std::uint64_t total_cycles = 0;
    std::uint64_t mac_ops = 0;
    double utilization = 0.0;  // mac_ops / (total_cycles * R * C)
    double wall_time_s = 0.0;  // total_cycles / clock_hz
};

struct MatVecResult {
    std::vector<std::int32_t> outputs;  // row-major, m*b
    CycleReport report;
};

// Cycle schedule:
//   - input element k enters its chain at cycle k (skewed injection), and a
//     chain of length C emits its sum C cycles after its first element enters;
//     with the row skew an M<=R, K<=C matvec takes rows_used + C - 1 cycles
//     and each extra pipelined pass adds exactly 1 cycle.
//   - K > C: the vector is split into ceil(K/C) fragments, each a separate
//     pipelined pass; fragment partial sums are reduced at the chain output
//     at no modeled cycle cost.
//   - M > R: sequential row tiles, each paying its own fill.
std::uint64_t matvec_cycles(const SystolicArrayConfig& config, std::uint64_t m,
                            std::uint64_t k, std::uint64_t b);

// Runs the job and returns exact integer outputs (32-bit accumulation;
// overflow of an accumulator throws std::overflow_error) together with the
// cycle report. Dimension mismatches throw std::invalid_argument.
MatVecResult simulate_matvec(const SystolicArrayConfig& config, const MatVecJob& job);

// R * C cells * 2 ops per cell per cycle.
double peak_ops_per_second(const SystolicArrayConfig& config);

// mac_ops / total_cycles for the given job; approaches min(M,R)*min(K,C)
// as B grows for a single tile.
double steady_state_throughput(const SystolicArrayConfig& config, const MatVecJob& job);

}  // namespace edgepipe
