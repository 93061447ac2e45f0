#include "edgepipe/model.hpp"

#include <stdexcept>

namespace edgepipe {

SweepConfig default_fc_sweep() {
    SweepConfig c;
    c.kind = SweepKind::FC;
    c.layer_count = 5;
    c.param_min = 100;
    c.param_max = 2640;
    c.param_step = 40;
    c.input_size = 64;
    c.output_size = 10;
    return c;
}

SweepConfig default_conv_sweep() {
    SweepConfig c;
    c.kind = SweepKind::Conv;
    c.layer_count = 5;
    c.param_min = 32;
    c.param_max = 702;
    c.param_step = 10;
    c.in_channels = 3;
    c.in_h = 64;
    c.in_w = 64;
    c.kernel_h = 3;
    c.kernel_w = 3;
    return c;
}

ModelSpec build_fc_model(const SweepConfig& config, std::uint64_t nodes) {
    if (config.kind != SweepKind::FC)
        throw std::invalid_argument("build_fc_model: config kind is not FC");
    if (nodes < 1)
        throw std::invalid_argument("build_fc_model: node count must be >= 1");
    if (config.layer_count < 1)
        throw std::invalid_argument("build_fc_model: layer_count must be >= 1");

    ModelSpec model;
    model.id = "fc_n" + std::to_string(nodes);
    const std::uint64_t l = config.layer_count;
    if (l == 1) {
        model.layers.push_back(FullyConnected{config.input_size, config.output_size});
    } else {
        model.layers.push_back(FullyConnected{config.input_size, nodes});
        for (std::uint64_t i = 0; i + 2 < l; ++i)
            model.layers.push_back(FullyConnected{nodes, nodes});
        model.layers.push_back(FullyConnected{nodes, config.output_size});
    }
    validate_model(model);
    return model;
}

ModelSpec build_conv_model(const SweepConfig& config, std::uint64_t filters) {
    if (config.kind != SweepKind::Conv)
        throw std::invalid_argument("build_conv_model: config kind is not Conv");
    if (filters < 1)
        throw std::invalid_argument("build_conv_model: filter count must be >= 1");
    if (config.layer_count < 1)
        throw std::invalid_argument("build_conv_model: layer_count must be >= 1");

    ModelSpec model;
    model.id = "conv_f" + std::to_string(filters);
    for (std::uint64_t i = 0; i < config.layer_count; ++i) {
        Convolution layer;
        layer.in_channels = (i == 0) ? config.in_channels : filters;
        layer.filters = filters;
        layer.kernel_h = config.kernel_h;
        layer.kernel_w = config.kernel_w;
        layer.in_h = config.in_h;
        layer.in_w = config.in_w;
        model.layers.push_back(layer);
    }
    validate_model(model);
    return model;
}

std::vector<ModelSpec> enumerate_sweep(const SweepConfig& config) {
    if (config.param_min > config.param_max)
        throw std::invalid_argument("enumerate_sweep: param_min > param_max");
    if (config.param_step < 1)
        throw std::invalid_argument("enumerate_sweep: param_step must be >= 1");

    std::vector<ModelSpec> models;
    for (std::uint64_t p = config.param_min; p <= config.param_max; p += config.param_step) {
        models.push_back(config.kind == SweepKind::FC ? build_fc_model(config, p)
                                                      : build_conv_model(config, p));
    }
    return models;
}

std::uint64_t layer_macs(const LayerSpec& layer) {
    if (const auto* fc = std::get_if<FullyConnected>(&layer))
        return fc->inputs * fc->outputs;
    const auto& conv = std::get<Convolution>(layer);
    // Same padding, stride 1: every weight fires once per output position.
    return conv.in_channels * conv.in_h * conv.in_w * conv.filters * conv.kernel_h *
           conv.kernel_w;
}

std::uint64_t layer_weight_bytes(const LayerSpec& layer, std::uint64_t bytes_per_weight) {
    if (const auto* fc = std::get_if<FullyConnected>(&layer))
        return fc->inputs * fc->outputs * bytes_per_weight;
    const auto& conv = std::get<Convolution>(layer);
    return conv.in_channels * conv.filters * conv.kernel_h * conv.kernel_w * bytes_per_weight;
}

std::uint64_t layer_input_bytes(const LayerSpec& layer) {
    if (const auto* fc = std::get_if<FullyConnected>(&layer)) return fc->inputs;
    const auto& conv = std::get<Convolution>(layer);
    return conv.in_channels * conv.in_h * conv.in_w;
}

std::uint64_t layer_output_bytes(const LayerSpec& layer) {
    if (const auto* fc = std::get_if<FullyConnected>(&layer)) return fc->outputs;
    const auto& conv = std::get<Convolution>(layer);
    return conv.filters * conv.in_h * conv.in_w;
}

std::uint64_t model_macs(const ModelSpec& model) {
    std::uint64_t total = 0;
    for (const auto& layer : model.layers) total += layer_macs(layer);
    return total;
}

std::uint64_t model_weight_bytes(const ModelSpec& model) {
    std::uint64_t total = 0;
    for (const auto& layer : model.layers)
        total += layer_weight_bytes(layer, model.bytes_per_weight);
    return total;
}

namespace {

void validate_layer(const LayerSpec& layer) {
    if (const auto* fc = std::get_if<FullyConnected>(&layer)) {
        if (fc->inputs < 1 || fc->outputs < 1)
            throw std::invalid_argument("FullyConnected: counts must be >= 1");
        return;
    }
    const auto& conv = std::get<Convolution>(layer);
    if (conv.in_channels < 1 || conv.filters < 1 || conv.kernel_h < 1 || conv.kernel_w < 1 ||
        conv.in_h < 1 || conv.in_w < 1)
        throw std::invalid_argument("Convolution: counts must be >= 1");
}

}  // namespace

void validate_model(const ModelSpec& model) {
    if (model.layers.empty())
        throw std::invalid_argument("ModelSpec: at least one layer required");
    if (model.bytes_per_weight < 1)
        throw std::invalid_argument("ModelSpec: bytes_per_weight must be >= 1");
    for (const auto& layer : model.layers) validate_layer(layer);

    for (std::size_t i = 0; i + 1 < model.layers.size(); ++i) {
        const auto& cur = model.layers[i];
        const auto& next = model.layers[i + 1];
        const auto* fc_cur = std::get_if<FullyConnected>(&cur);
        const auto* fc_next = std::get_if<FullyConnected>(&next);
        if (fc_cur && fc_next) {
            if (fc_cur->outputs != fc_next->inputs)
                throw std::invalid_argument("ModelSpec: FC outputs must equal next FC inputs");
        } else if (!fc_cur && !fc_next) {
            const auto& c_cur = std::get<Convolution>(cur);
            const auto& c_next = std::get<Convolution>(next);
            if (c_cur.filters != c_next.in_channels)
                throw std::invalid_argument(
                    "ModelSpec: Conv filters must equal next Conv in_channels");
            if (c_cur.in_h != c_next.in_h || c_cur.in_w != c_next.in_w)
                throw std::invalid_argument(
                    "ModelSpec: same padding requires constant spatial dims");
        } else {
            throw std::invalid_argument("ModelSpec: mixed FC/Conv adjacency not supported");
        }
    }
}

}  // namespace edgepipe
