#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace edgepipe {

// Dense layer: every weight participates in exactly one multiply-accumulate
// per inference, so MACs == weight count.
struct FullyConnected {
    std::uint64_t inputs = 1;
    std::uint64_t outputs = 1;
};

// Convolution with stride 1 and "same" padding: output spatial dims equal the
// input's, so each weight is applied once per output position.
struct Convolution {
    std::uint64_t in_channels = 1;
    std::uint64_t filters = 1;
    std::uint64_t kernel_h = 1;
    std::uint64_t kernel_w = 1;
    std::uint64_t in_h = 1;
    std::uint64_t in_w = 1;
};

using LayerSpec = std::variant<FullyConnected, Convolution>;

struct ModelSpec {
    std::string id;
    std::vector<LayerSpec> layers;
    std::uint64_t bytes_per_weight = 1;  // 1 == int8 quantized weights
};

enum class SweepKind { FC, Conv };

// Parametric family of synthetic models. The swept parameter is the node
// count per layer (FC) or the filter count per layer (Conv); everything else
// is held fixed.
struct SweepConfig {
    SweepKind kind = SweepKind::FC;
    std::uint64_t layer_count = 5;
    std::uint64_t param_min = 100;
    std::uint64_t param_max = 2640;
    std::uint64_t param_step = 40;

    // FC only: model input width and output width.
    std::uint64_t input_size = 64;
    std::uint64_t output_size = 10;

    // Conv only: input tensor and kernel geometry.
    std::uint64_t in_channels = 3;
    std::uint64_t in_h = 64;
    std::uint64_t in_w = 64;
    std::uint64_t kernel_h = 3;
    std::uint64_t kernel_w = 3;
};

// The two stock sweep families: 5-layer FC (n = 100..2640 step 40, 64 in,
// 10 out) and 5-layer Conv (f = 32..702 step 10, 3x64x64 input, 3x3 kernels).
SweepConfig default_fc_sweep();
SweepConfig default_conv_sweep();

// Builds one model of the family for a concrete parameter value. Layer shapes
// chain: FC is I->n, (L-2)x(n->n), n->O; Conv layer 1 takes the configured
// input channels, later layers take f channels. Throws std::invalid_argument
// on a kind mismatch or zero-sized parameter.
ModelSpec build_fc_model(const SweepConfig& config, std::uint64_t nodes);
ModelSpec build_conv_model(const SweepConfig& config, std::uint64_t filters);

// One model per parameter value in [min, max] with the configured step;
// param_max is included only when (max - min) is a multiple of the step.
std::vector<ModelSpec> enumerate_sweep(const SweepConfig& config);

// Per-layer accounting. Bias terms are excluded throughout: they contribute
// no MACs and would break the FC MACs == weight-bytes identity.
std::uint64_t layer_macs(const LayerSpec& layer);
std::uint64_t layer_weight_bytes(const LayerSpec& layer, std::uint64_t bytes_per_weight = 1);
std::uint64_t layer_input_bytes(const LayerSpec& layer);   // int8 activations
std::uint64_t layer_output_bytes(const LayerSpec& layer);  // int8 activations

std::uint64_t model_macs(const ModelSpec& model);
std::uint64_t model_weight_bytes(const ModelSpec& model);

// Checks all counts >= 1 and that adjacent layers are shape-compatible
// (FC outputs feed the next layer's inputs; Conv filters feed the next
// layer's channels). Throws std::invalid_argument on violation.
void validate_model(const ModelSpec& model);

}  // namespace edgepipe
