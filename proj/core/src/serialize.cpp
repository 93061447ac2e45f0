#include "edgepipe/serialize.hpp"

#include <stdexcept>

namespace edgepipe {

using nlohmann::json;

void to_json(json& j, const LayerSpec& layer) {
    if (const auto* fc = std::get_if<FullyConnected>(&layer)) {
        j = json{{"type", "fully_connected"}, {"inputs", fc->inputs}, {"outputs", fc->outputs}};
        return;
    }
    const auto& conv = std::get<Convolution>(layer);
    j = json{{"type", "convolution"},
             {"in_channels", conv.in_channels},
             {"filters", conv.filters},
             {"kernel_h", conv.kernel_h},
             {"kernel_w", conv.kernel_w},
             {"in_h", conv.in_h},
             {"in_w", conv.in_w}};
}

void from_json(const json& j, LayerSpec& layer) {
    const auto type = j.at("type").get<std::string>();
    if (type == "fully_connected") {
        layer = FullyConnected{j.at("inputs").get<std::uint64_t>(),
                               j.at("outputs").get<std::uint64_t>()};
    } else if (type == "convolution") {
        Convolution conv;
        conv.in_channels = j.at("in_channels").get<std::uint64_t>();
        conv.filters = j.at("filters").get<std::uint64_t>();
        conv.kernel_h = j.at("kernel_h").get<std::uint64_t>();
        conv.kernel_w = j.at("kernel_w").get<std::uint64_t>();
        conv.in_h = j.at("in_h").get<std::uint64_t>();
        conv.in_w = j.at("in_w").get<std::uint64_t>();
        layer = conv;
    } else {
        throw std::invalid_argument("LayerSpec: unknown layer type '" + type + "'");
    }
}

void to_json(json& j, const ModelSpec& model) {
    j = json{{"id", model.id},
             {"layers", model.layers},
             {"bytes_per_weight", model.bytes_per_weight}};
}

void from_json(const json& j, ModelSpec& model) {
    model.id = j.at("id").get<std::string>();
    model.layers = j.at("layers").get<std::vector<LayerSpec>>();
    model.bytes_per_weight = j.value("bytes_per_weight", std::uint64_t{1});
}

void to_json(json& j, const SweepConfig& config) {
    j = json{{"kind", config.kind == SweepKind::FC ? "fc" : "conv"},
             {"layer_count", config.layer_count},
             {"param_min", config.param_min},
             {"param_max", config.param_max},
             {"param_step", config.param_step},
             {"input_size", config.input_size},
             {"output_size", config.output_size},
             {"in_channels", config.in_channels},
             {"in_h", config.in_h},
             {"in_w", config.in_w},
             {"kernel_h", config.kernel_h},
             {"kernel_w", config.kernel_w}};
}

void from_json(const json& j, SweepConfig& config) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "fc")
        config = default_fc_sweep();
    else if (kind == "conv")
        config = default_conv_sweep();
    else
        throw std::invalid_argument("SweepConfig: kind must be 'fc' or 'conv'");
    config.layer_count = j.value("layer_count", config.layer_count);
    config.param_min = j.value("param_min", config.param_min);
    config.param_max = j.value("param_max", config.param_max);
    config.param_step = j.value("param_step", config.param_step);
    config.input_size = j.value("input_size", config.input_size);
    config.output_size = j.value("output_size", config.output_size);
    config.in_channels = j.value("in_channels", config.in_channels);
    config.in_h = j.value("in_h", config.in_h);
    config.in_w = j.value("in_w", config.in_w);
    config.kernel_h = j.value("kernel_h", config.kernel_h);
    config.kernel_w = j.value("kernel_w", config.kernel_w);
}

void to_json(json& j, const AcceleratorProfile& profile) {
    j = json{{"on_chip_bytes", profile.on_chip_bytes},
             {"reserved_bytes", profile.reserved_bytes},
             {"peak_macs_per_s", profile.peak_macs_per_s},
             {"effective_onchip_bw_bytes_per_s", profile.effective_onchip_bw_bytes_per_s},
             {"pcie_bw_bytes_per_s", profile.pcie_bw_bytes_per_s},
             {"pcie_latency_s", profile.pcie_latency_s},
             {"allocation_policy", profile.allocation_policy == AllocationPolicy::FirstFitSkip
                                       ? "first_fit_skip"
                                       : "first_fit_no_skip"}};
}

void from_json(const json& j, AcceleratorProfile& profile) {
    AcceleratorProfile defaults;
    profile.on_chip_bytes = j.value("on_chip_bytes", defaults.on_chip_bytes);
    profile.reserved_bytes = j.value("reserved_bytes", defaults.reserved_bytes);
    profile.peak_macs_per_s = j.value("peak_macs_per_s", defaults.peak_macs_per_s);
    profile.effective_onchip_bw_bytes_per_s =
        j.value("effective_onchip_bw_bytes_per_s", defaults.effective_onchip_bw_bytes_per_s);
    profile.pcie_bw_bytes_per_s = j.value("pcie_bw_bytes_per_s", defaults.pcie_bw_bytes_per_s);
    profile.pcie_latency_s = j.value("pcie_latency_s", defaults.pcie_latency_s);
    const auto policy = j.value("allocation_policy", std::string{"first_fit_skip"});
    if (policy == "first_fit_skip")
        profile.allocation_policy = AllocationPolicy::FirstFitSkip;
    else if (policy == "first_fit_no_skip")
        profile.allocation_policy = AllocationPolicy::FirstFitNoSkip;
    else
        throw std::invalid_argument("AcceleratorProfile: unknown allocation_policy '" + policy +
                                    "'");
}

void to_json(json& j, const Partition& partition) {
    j = json{{"sizes", partition.sizes}};
}

void from_json(const json& j, Partition& partition) {
    partition.sizes = j.at("sizes").get<std::vector<std::uint32_t>>();
}

void to_json(json& j, const CycleReport& report) {
    j = json{{"total_cycles", report.total_cycles},
             {"mac_ops", report.mac_ops},
             {"utilization", report.utilization},
             {"wall_time_s", report.wall_time_s}};
}

void to_json(json& j, const PartitionEvaluation& evaluation) {
    json stages = json::array();
    for (const auto& segment : evaluation.per_stage) {
        stages.push_back(json{{"compute_s", segment.cost.compute_s},
                              {"weight_stream_s", segment.cost.weight_stream_s},
                              {"io_s", segment.cost.io_s},
                              {"total_s", segment.cost.total_s()},
                              {"incoming_transfer_s", segment.incoming_transfer_s},
                              {"on_chip_used_bytes", segment.placement.on_chip_used_bytes},
                              {"host_bytes", segment.placement.host_bytes},
                              {"host_layers", segment.placement.host_layers()}});
    }
    j = json{{"sizes", evaluation.partition.sizes},
             {"partition", evaluation.partition.dashed()},
             {"per_stage", std::move(stages)},
             {"steady_state_per_inference_s", evaluation.steady_state_per_inference_s},
             {"batch", evaluation.batch},
             {"batch_makespan_s", evaluation.batch_makespan_s},
             {"fully_on_chip", evaluation.fully_on_chip}};
}

}  // namespace edgepipe
