#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "edgepipe/device.hpp"
#include "edgepipe/model.hpp"
#include "edgepipe/partition.hpp"
#include "edgepipe/pipeline.hpp"
#include "edgepipe/systolic.hpp"

using namespace edgepipe;

namespace {

MatVecJob random_job(std::uint64_t m, std::uint64_t k, std::uint64_t b) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> dist(-128, 127);
    MatVecJob job;
    job.m = m;
    job.k = k;
    job.b = b;
    job.weights.resize(m * k);
    job.inputs.resize(b * k);
    for (auto& w : job.weights) w = static_cast<std::int8_t>(dist(rng));
    for (auto& x : job.inputs) x = static_cast<std::int8_t>(dist(rng));
    return job;
}

PipelinePlan random_plan(std::size_t stages) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> latency(1e-4, 5e-3);
    PipelinePlan plan;
    for (std::size_t i = 0; i < stages; ++i) {
        PipelineStage stage;
        stage.latency_s = latency(rng);
        stage.transfer_s = latency(rng) / 10.0;
        plan.stages.push_back(stage);
    }
    return plan;
}

void systolic_matvec(benchmark::State& state) {
    const auto dim = static_cast<std::uint64_t>(state.range(0));
    const SystolicArrayConfig config{64, 64, 480e6};
    const MatVecJob job = random_job(dim, dim, 4);
    for (auto _ : state) {
        auto result = simulate_matvec(config, job);
        benchmark::DoNotOptimize(result.outputs.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(dim * dim * 4));
}
BENCHMARK(systolic_matvec)->Arg(64)->Arg(128)->Arg(256);

void event_simulation(benchmark::State& state) {
    const auto plan = random_plan(static_cast<std::size_t>(state.range(0)));
    SimOptions options;
    options.batch = 1000;
    for (auto _ : state) {
        auto result = simulate_events(plan, options);
        benchmark::DoNotOptimize(result.makespan_s);
    }
}
BENCHMARK(event_simulation)->Arg(2)->Arg(4)->Arg(8);

void concurrent_emulation(benchmark::State& state) {
    const auto plan = random_plan(4);
    SimOptions options;
    options.batch = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state) {
        auto result = emulate_concurrent(plan, options);
        benchmark::DoNotOptimize(result.makespan_s);
    }
}
BENCHMARK(concurrent_emulation)->Arg(50)->Arg(500);

void partition_enumeration(benchmark::State& state) {
    const auto layers = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state) {
        for (std::uint32_t s = 1; s <= layers; ++s) {
            auto partitions = enumerate_partitions(layers, s);
            benchmark::DoNotOptimize(partitions.data());
        }
    }
}
BENCHMARK(partition_enumeration)->Arg(5)->Arg(12)->Arg(16);

void exhaustive_search(benchmark::State& state) {
    const ModelSpec model = build_fc_model(default_fc_sweep(), 1900);
    const std::vector<AcceleratorProfile> profiles(static_cast<std::size_t>(state.range(0)),
                                                   AcceleratorProfile{});
    for (auto _ : state) {
        auto best = exhaustive_best(model, static_cast<std::uint32_t>(state.range(0)), profiles,
                                    50);
        benchmark::DoNotOptimize(best.batch_makespan_s);
    }
}
BENCHMARK(exhaustive_search)->Arg(2)->Arg(3)->Arg(4);

void single_device_cost(benchmark::State& state) {
    const ModelSpec model = build_conv_model(default_conv_sweep(), 702);
    const AcceleratorProfile profile;
    for (auto _ : state) {
        auto cost = single_device_time(model, profile);
        benchmark::DoNotOptimize(cost.compute_s);
    }
}
BENCHMARK(single_device_cost);

}  // namespace

BENCHMARK_MAIN();
