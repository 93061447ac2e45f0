#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "edgepipe/model.hpp"

namespace edgepipe {

// What happens when the weights do not all fit on chip: whole layers spill to
// host memory and are re-streamed over PCIe on every inference.
enum class AllocationPolicy {
    FirstFitSkip,    // a layer that does not fit goes to host; later smaller layers may still fit
    FirstFitNoSkip,  // once a layer fails to fit, all remaining layers go to host
};

struct AcceleratorProfile {
    std::uint64_t on_chip_bytes = 8u * 1024 * 1024;  // 8 MiB local store
    std::uint64_t reserved_bytes = 1u * 1024 * 1024; // instructions + activations reserve
    double peak_macs_per_s = 1.96608e12;             // peak ops / 2
    double effective_onchip_bw_bytes_per_s = 3.0e9;
    double pcie_bw_bytes_per_s = 4.0e8;
    double pcie_latency_s = 1.0e-4;                  // fixed cost per transfer
    AllocationPolicy allocation_policy = AllocationPolicy::FirstFitSkip;

    // Weight capacity available to the allocator.
    std::uint64_t capacity_bytes() const {
        return on_chip_bytes > reserved_bytes ? on_chip_bytes - reserved_bytes : 0;
    }
};

enum class LayerLocation { OnChip, HostResident };

struct Placement {
    std::vector<LayerLocation> locations;  // one per layer, execution order
    std::uint64_t on_chip_used_bytes = 0;
    std::uint64_t host_bytes = 0;

    std::uint32_t host_layers() const {
        std::uint32_t n = 0;
        for (auto loc : locations)
            if (loc == LayerLocation::HostResident) ++n;
        return n;
    }
};

struct StageCost {
    double compute_s = 0.0;        // roofline: max of compute and on-chip memory time
    double weight_stream_s = 0.0;  // host-resident weights over PCIe, every inference
    double io_s = 0.0;             // stage input upload + output download

    double total_s() const { return compute_s + weight_stream_s + io_s; }
};

// Walks the layers in execution order placing each on chip if its weights fit
// in the remaining capacity (minus the reserve). A layer larger than the whole
// capacity is host-resident, not an error.
Placement allocate_layers(std::span<const LayerSpec> layers, const AcceleratorProfile& profile,
                          std::uint64_t bytes_per_weight = 1);

// Cost of running `layers` as one pipeline stage under the given placement:
//   compute_s       = sum of per-layer max(macs/peak, bytes/onchip_bw)
//   weight_stream_s = sum over host-resident layers of wb/pcie_bw + latency
//   io_s            = (first layer input + last layer output)/pcie_bw + 2*latency
StageCost stage_cost(std::span<const LayerSpec> layers, const Placement& placement,
                     const AcceleratorProfile& profile, std::uint64_t bytes_per_weight = 1);

// Whole model on one device: allocate, then cost all layers as a single stage.
StageCost single_device_time(const ModelSpec& model, const AcceleratorProfile& profile);

// model MACs / (weight bytes + output bytes) per inference.
double arithmetic_intensity(const ModelSpec& model);

}  // namespace edgepipe
