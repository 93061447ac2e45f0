#include "edgepipe/device.hpp"

#include <algorithm>
#include <stdexcept>

namespace edgepipe {

namespace {

void validate_profile(const AcceleratorProfile& profile) {
    if (profile.on_chip_bytes == 0 || profile.peak_macs_per_s <= 0.0 ||
        profile.effective_onchip_bw_bytes_per_s <= 0.0 || profile.pcie_bw_bytes_per_s <= 0.0 ||
        profile.pcie_latency_s < 0.0)
        throw std::invalid_argument("AcceleratorProfile: parameters must be positive");
    if (profile.reserved_bytes >= profile.on_chip_bytes)
        throw std::invalid_argument("AcceleratorProfile: reserved_bytes >= on_chip_bytes");
}

}  // namespace

Placement allocate_layers(std::span<const LayerSpec> layers, const AcceleratorProfile& profile,
                          std::uint64_t bytes_per_weight) {
    validate_profile(profile);
    if (layers.empty())
        throw std::invalid_argument("allocate_layers: empty layer list");

    Placement placement;
    std::uint64_t remaining = profile.capacity_bytes();
    bool spilled = false;
    for (const auto& layer : layers) {
        const std::uint64_t wb = layer_weight_bytes(layer, bytes_per_weight);
        const bool fits = wb <= remaining;
        const bool blocked =
            profile.allocation_policy == AllocationPolicy::FirstFitNoSkip && spilled;
        if (fits && !blocked) {
            placement.locations.push_back(LayerLocation::OnChip);
            placement.on_chip_used_bytes += wb;
            remaining -= wb;
        } else {
            placement.locations.push_back(LayerLocation::HostResident);
            placement.host_bytes += wb;
            spilled = true;
        }
    }
    return placement;
}

StageCost stage_cost(std::span<const LayerSpec> layers, const Placement& placement,
                     const AcceleratorProfile& profile, std::uint64_t bytes_per_weight) {
    if (placement.locations.size() != layers.size())
        throw std::invalid_argument("stage_cost: placement does not match layers");

    StageCost cost;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& layer = layers[i];
        const double macs = static_cast<double>(layer_macs(layer));
        const double bytes = static_cast<double>(layer_weight_bytes(layer, bytes_per_weight) +
                                                 layer_input_bytes(layer) +
                                                 layer_output_bytes(layer));
        cost.compute_s += std::max(macs / profile.peak_macs_per_s,
                                   bytes / profile.effective_onchip_bw_bytes_per_s);
        if (placement.locations[i] == LayerLocation::HostResident) {
            const double wb = static_cast<double>(layer_weight_bytes(layer, bytes_per_weight));
            cost.weight_stream_s += wb / profile.pcie_bw_bytes_per_s + profile.pcie_latency_s;
        }
    }
    const double io_bytes = static_cast<double>(layer_input_bytes(layers.front()) +
                                                layer_output_bytes(layers.back()));
    cost.io_s = io_bytes / profile.pcie_bw_bytes_per_s + 2.0 * profile.pcie_latency_s;
    return cost;
}

StageCost single_device_time(const ModelSpec& model, const AcceleratorProfile& profile) {
    validate_model(model);
    const Placement placement = allocate_layers(model.layers, profile, model.bytes_per_weight);
    return stage_cost(model.layers, placement, profile, model.bytes_per_weight);
}

double arithmetic_intensity(const ModelSpec& model) {
    validate_model(model);
    std::uint64_t bytes = 0;
    for (const auto& layer : model.layers)
        bytes += layer_weight_bytes(layer, model.bytes_per_weight) + layer_output_bytes(layer);
    return static_cast<double>(model_macs(model)) / static_cast<double>(bytes);
}

}  // namespace edgepipe
