#include "edgepipe/partition.hpp"

#include <algorithm>
#include <limits>

namespace edgepipe {

std::string Partition::dashed() const {
    std::string out;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(sizes[i]);
    }
    return out;
}

namespace {

void check_args(std::uint32_t layers, std::uint32_t segments) {
    if (segments < 1 || segments > layers)
        throw std::invalid_argument("partitioner: need 1 <= segments <= layers");
}

}  // namespace

std::uint64_t count_partitions(std::uint32_t layers, std::uint32_t segments) {
    check_args(layers, segments);
    // C(l-1, s-1)
    const std::uint64_t n = layers - 1;
    std::uint64_t k = segments - 1;
    k = std::min<std::uint64_t>(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

std::vector<Partition> enumerate_partitions(std::uint32_t layers, std::uint32_t segments) {
    check_args(layers, segments);
    std::vector<Partition> out;
    std::vector<std::uint32_t> sizes(segments, 1);

    // Recursively assign sizes left to right, smallest first, so the overall
    // order is lexicographic.
    auto emit = [&](auto&& self, std::uint32_t index, std::uint32_t remaining) -> void {
        const std::uint32_t slots_left = segments - index;
        if (slots_left == 1) {
            sizes[index] = remaining;
            out.push_back(Partition{sizes});
            return;
        }
        for (std::uint32_t size = 1; size + (slots_left - 1) <= remaining; ++size) {
            sizes[index] = size;
            self(self, index + 1, remaining - size);
        }
    };
    emit(emit, 0, layers);
    return out;
}

Partition even_split(std::uint32_t layers, std::uint32_t segments) {
    check_args(layers, segments);
    const std::uint32_t base = layers / segments;
    const std::uint32_t larger = layers % segments;
    Partition partition;
    partition.sizes.assign(segments, base);
    for (std::uint32_t i = segments - larger; i < segments; ++i) partition.sizes[i] = base + 1;
    return partition;
}

PartitionEvaluation evaluate_partition(const ModelSpec& model, const Partition& partition,
                                       std::span<const AcceleratorProfile> profiles,
                                       std::uint32_t batch) {
    validate_model(model);
    if (batch < 1) throw std::invalid_argument("evaluate_partition: batch must be >= 1");
    const std::uint32_t n_segments = partition.segments();
    if (profiles.size() != n_segments)
        throw std::invalid_argument("evaluate_partition: one profile per segment required");
    std::uint64_t total_layers = 0;
    for (auto size : partition.sizes) {
        if (size < 1) throw std::invalid_argument("evaluate_partition: empty segment");
        total_layers += size;
    }
    if (total_layers != model.layers.size())
        throw std::invalid_argument("evaluate_partition: partition does not cover the model");

    PartitionEvaluation evaluation;
    evaluation.partition = partition;
    evaluation.batch = batch;
    evaluation.fully_on_chip = true;

    std::size_t offset = 0;
    for (std::uint32_t i = 0; i < n_segments; ++i) {
        const AcceleratorProfile& profile = profiles[i];
        const std::size_t first = offset;
        const std::span<const LayerSpec> layers(model.layers.data() + first,
                                                partition.sizes[i]);
        offset += partition.sizes[i];

        SegmentCost segment;
        segment.placement = allocate_layers(layers, profile, model.bytes_per_weight);
        if (segment.placement.host_bytes > 0) evaluation.fully_on_chip = false;

        const StageCost raw = stage_cost(layers, segment.placement, profile,
                                         model.bytes_per_weight);
        segment.cost.compute_s = raw.compute_s;
        segment.cost.weight_stream_s = raw.weight_stream_s;

        // A boundary tensor travels device->host->device; the producing stage
        // pays the download hop and the consuming stage pays the upload hop,
        // 2*(bytes/pcie_bw + latency) in total. Stage 1's incoming hop is the
        // model-input upload, the last stage's outgoing hop the model-output
        // download.
        const double in_bytes = static_cast<double>(
            i == 0 ? layer_input_bytes(layers.front())
                   : layer_output_bytes(model.layers[first - 1]));
        const double out_bytes = static_cast<double>(layer_output_bytes(layers.back()));
        segment.incoming_transfer_s =
            in_bytes / profile.pcie_bw_bytes_per_s + profile.pcie_latency_s;
        segment.cost.io_s =
            segment.incoming_transfer_s +
            out_bytes / profile.pcie_bw_bytes_per_s + profile.pcie_latency_s;
        evaluation.per_stage.push_back(std::move(segment));
    }

    const PipelinePlan plan = make_plan(evaluation);
    double slowest = 0.0;
    for (const auto& stage : plan.stages) slowest = std::max(slowest, stage.effective_s());
    evaluation.steady_state_per_inference_s = slowest;
    evaluation.batch_makespan_s = analytic_makespan(plan, batch);
    return evaluation;
}

PipelinePlan make_plan(const PartitionEvaluation& evaluation) {
    PipelinePlan plan;
    for (const auto& segment : evaluation.per_stage) {
        PipelineStage stage;
        stage.transfer_s = segment.incoming_transfer_s;
        stage.latency_s = segment.cost.total_s() - segment.incoming_transfer_s;
        plan.stages.push_back(stage);
    }
    return plan;
}

PartitionEvaluation exhaustive_best(const ModelSpec& model, std::uint32_t segments,
                                    std::span<const AcceleratorProfile> profiles,
                                    std::uint32_t batch, std::uint64_t budget) {
    const auto layers = static_cast<std::uint32_t>(model.layers.size());
    check_args(layers, segments);
    if (count_partitions(layers, segments) > budget)
        throw EnumerationBudgetError(
            "exhaustive_best: partition count exceeds the enumeration budget; "
            "use threshold_partition instead");

    PartitionEvaluation best;
    bool have_best = false;
    for (const auto& partition : enumerate_partitions(layers, segments)) {
        PartitionEvaluation evaluation = evaluate_partition(model, partition, profiles, batch);
        // Strict less keeps the lexicographically smallest sizes on ties,
        // since enumeration order is lexicographic.
        if (!have_best || evaluation.batch_makespan_s < best.batch_makespan_s) {
            best = std::move(evaluation);
            have_best = true;
        }
    }
    return best;
}

PartitionEvaluation threshold_partition(const ModelSpec& model, std::uint32_t segments,
                                        std::span<const AcceleratorProfile> profiles,
                                        std::uint32_t batch, double max_diff_s) {
    const auto layers = static_cast<std::uint32_t>(model.layers.size());
    check_args(layers, segments);

    PartitionEvaluation last;
    for (const auto& partition : enumerate_partitions(layers, segments)) {
        last = evaluate_partition(model, partition, profiles, batch);
        double fastest = std::numeric_limits<double>::infinity();
        double slowest = 0.0;
        for (const auto& segment : last.per_stage) {
            const double exec = segment.cost.compute_s + segment.cost.weight_stream_s;
            fastest = std::min(fastest, exec);
            slowest = std::max(slowest, exec);
        }
        if (slowest - fastest <= max_diff_s) return last;
    }
    return last;  // none met the threshold: the last tested configuration wins
}

}  // namespace edgepipe
