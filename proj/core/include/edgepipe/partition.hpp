#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgepipe/device.hpp"
#include "edgepipe/model.hpp"
#include "edgepipe/pipeline.hpp"

namespace edgepipe {

// A composition of l layers into s contiguous segments: segment i owns the
// next sizes[i] consecutive layers of the model.
struct Partition {
    std::vector<std::uint32_t> sizes;

    std::uint32_t segments() const { return static_cast<std::uint32_t>(sizes.size()); }
    std::string dashed() const;  // "1-2-2"
};

struct SegmentCost {
    StageCost cost;                  // io_s covers this segment's share of PCIe transfers
    double incoming_transfer_s = 0;  // model-input upload (stage 1) or boundary hop
    Placement placement;
};

struct PartitionEvaluation {
    Partition partition;
    std::vector<SegmentCost> per_stage;
    double steady_state_per_inference_s = 0.0;  // max over stages of effective latency
    double batch_makespan_s = 0.0;
    std::uint32_t batch = 1;
    bool fully_on_chip = false;
};

// Raised when an exhaustive search would exceed its enumeration budget.
class EnumerationBudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// All C(l-1, s-1) compositions, in lexicographic order of sizes.
// Throws std::invalid_argument when s > l or s == 0.
std::vector<Partition> enumerate_partitions(std::uint32_t layers, std::uint32_t segments);
std::uint64_t count_partitions(std::uint32_t layers, std::uint32_t segments);  // C(l-1, s-1)

// floor(l/s) layers for the first s - (l mod s) segments, one more for the
// rest: [1,2,2] for (5,3), [1,1,1,2] for (5,4).
Partition even_split(std::uint32_t layers, std::uint32_t segments);

// Per-segment allocation + cost under one profile per segment. The boundary
// tensor between segments i and i+1 travels device->host->device,
// 2*(bytes/pcie_bw + latency) in total, split one hop per side: segment i pays
// the download, segment i+1 the upload (so a single segment reproduces
// single_device_time exactly). Steady state and batch makespan come from the
// analytic pipeline backend.
PartitionEvaluation evaluate_partition(const ModelSpec& model, const Partition& partition,
                                       std::span<const AcceleratorProfile> profiles,
                                       std::uint32_t batch);

PipelinePlan make_plan(const PartitionEvaluation& evaluation);

// Minimizes batch makespan over all partitions; ties go to the
// lexicographically smallest sizes. Throws EnumerationBudgetError when
// C(l-1, s-1) exceeds the budget.
PartitionEvaluation exhaustive_best(const ModelSpec& model, std::uint32_t segments,
                                    std::span<const AcceleratorProfile> profiles,
                                    std::uint32_t batch, std::uint64_t budget = 1'000'000);

// Walks partitions in lexicographic order and returns the first whose
// fastest-vs-slowest segment latency gap (transfers excluded) is within
// max_diff_s; if none qualifies, the last tested configuration is returned.
PartitionEvaluation threshold_partition(const ModelSpec& model, std::uint32_t segments,
                                        std::span<const AcceleratorProfile> profiles,
                                        std::uint32_t batch, double max_diff_s);

}  // namespace edgepipe
