#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "edgepipe/device.hpp"

namespace edgepipe {

// One pipeline stage: its service latency plus the transfer that delivers its
// input (device->host->device for interior stages, the model-input upload for
// stage 1). Transfer and service are strictly additive, no overlap.
struct PipelineStage {
    double latency_s = 0.0;
    double transfer_s = 0.0;

    double effective_s() const { return latency_s + transfer_s; }
};

struct PipelinePlan {
    std::vector<PipelineStage> stages;
};

enum class Backend { Analytic, Events, Emulated };

struct SimOptions {
    std::uint32_t batch = 1;
    Backend backend = Backend::Events;
    std::optional<std::uint32_t> queue_capacity;  // unbounded by default
};

struct TimelineEvent {
    std::uint32_t stage = 0;
    std::uint32_t input = 0;
    double start_s = 0.0;
    double end_s = 0.0;
};

struct SimResult {
    double makespan_s = 0.0;
    double per_inference_s = 0.0;  // makespan / batch
    std::vector<double> stage_busy_s;
    std::uint32_t bottleneck_stage = 0;  // index of max effective latency
    std::vector<TimelineEvent> timeline;  // empty for the analytic backend
};

// Fill plus steady-state drain with unbounded queues:
//   sum_i (transfer_i + latency_i) + (B-1) * max_i (transfer_i + latency_i)
double analytic_makespan(const PipelinePlan& plan, std::uint32_t batch);

// Deterministic discrete-event simulation. Each stage serves inputs FIFO, one
// at a time; with unbounded queues the makespan equals analytic_makespan
// exactly. With a bounded queue a stage holds a finished input (blocking its
// server) until the downstream queue has room; an input leaves the queue when
// its service starts.
SimResult simulate_events(const PipelinePlan& plan, const SimOptions& options);

// One worker thread per stage connected by FIFO channels. Service times are
// virtual-time delays, so the reported result is identical to simulate_events
// regardless of physical scheduling. wall_clock additionally sleeps for each
// service interval (demo mode only).
SimResult emulate_concurrent(const PipelinePlan& plan, const SimOptions& options,
                             bool wall_clock = false);

SimResult run_pipeline(const PipelinePlan& plan, const SimOptions& options);

// result_1.makespan / result_B.per_inference (same plan, batch 1 vs batch B).
double speedup_vs_single_input(const SimResult& batched, const SimResult& single_input);

// single.total / result.per_inference, where `single` is the one-device cost
// of the same model.
double speedup_vs_single_device(const SimResult& result, const StageCost& single);

// CSV: stage,input_index,start_s,end_s
void write_timeline_csv(std::ostream& out, const SimResult& result);

}  // namespace edgepipe
