#include "edgepipe/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>

namespace edgepipe {

namespace {

void validate(const PipelinePlan& plan, const SimOptions& options) {
    if (plan.stages.empty())
        throw std::invalid_argument("PipelinePlan: at least one stage required");
    for (const auto& stage : plan.stages)
        if (stage.latency_s < 0.0 || stage.transfer_s < 0.0)
            throw std::invalid_argument("PipelinePlan: latencies must be >= 0");
    if (options.batch < 1)
        throw std::invalid_argument("SimOptions: batch must be >= 1");
    if (options.queue_capacity && *options.queue_capacity < 1)
        throw std::invalid_argument("SimOptions: bounded queue capacity must be >= 1");
}

std::uint32_t bottleneck_of(const PipelinePlan& plan) {
    std::uint32_t best = 0;
    for (std::uint32_t i = 1; i < plan.stages.size(); ++i)
        if (plan.stages[i].effective_s() > plan.stages[best].effective_s()) best = i;
    return best;
}

}  // namespace

double analytic_makespan(const PipelinePlan& plan, std::uint32_t batch) {
    SimOptions options;
    options.batch = batch;
    validate(plan, options);
    double fill = 0.0;
    double slowest = 0.0;
    for (const auto& stage : plan.stages) {
        fill += stage.effective_s();
        slowest = std::max(slowest, stage.effective_s());
    }
    return fill + static_cast<double>(batch - 1) * slowest;
}

SimResult simulate_events(const PipelinePlan& plan, const SimOptions& options) {
    validate(plan, options);
    const std::size_t n_stages = plan.stages.size();
    const std::uint32_t batch = options.batch;

    // start[i][j] is needed later to free a bounded queue slot: the input
    // occupying the slot leaves it when its service starts downstream.
    std::vector<std::vector<double>> start(n_stages, std::vector<double>(batch, 0.0));
    std::vector<double> release(n_stages, 0.0);  // server-free time per stage

    SimResult result;
    result.stage_busy_s.assign(n_stages, 0.0);
    result.timeline.reserve(n_stages * batch);

    std::vector<std::vector<TimelineEvent>> events(n_stages);
    for (std::uint32_t j = 0; j < batch; ++j) {
        double arrive = 0.0;  // the whole batch is available at t = 0
        for (std::size_t i = 0; i < n_stages; ++i) {
            const double service = plan.stages[i].effective_s();
            const double begin = std::max(arrive, release[i]);
            const double done = begin + service;
            start[i][j] = begin;
            result.stage_busy_s[i] += service;
            events[i].push_back({static_cast<std::uint32_t>(i), j, begin, done});

            if (i + 1 < n_stages) {
                double next_arrive = done;
                if (options.queue_capacity && j >= *options.queue_capacity)
                    next_arrive = std::max(done, start[i + 1][j - *options.queue_capacity]);
                release[i] = next_arrive;  // server blocked until the handoff
                arrive = next_arrive;
            } else {
                release[i] = done;
                result.makespan_s = done;
            }
        }
    }

    for (auto& per_stage : events)
        result.timeline.insert(result.timeline.end(), per_stage.begin(), per_stage.end());
    result.per_inference_s = result.makespan_s / static_cast<double>(batch);
    result.bottleneck_stage = bottleneck_of(plan);
    return result;
}

namespace {

// Unbounded FIFO channel carrying (input index, virtual timestamp) tokens.
class Channel {
  public:
    void push(std::uint32_t input, double time) {
        {
            std::lock_guard lock(mutex_);
            items_.push_back({input, time});
        }
        cv_.notify_one();
    }

    std::pair<std::uint32_t, double> pop() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [this] { return !items_.empty(); });
        auto item = items_.front();
        items_.pop_front();
        return item;
    }

  private:
    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<std::pair<std::uint32_t, double>> items_;
};

}  // namespace

SimResult emulate_concurrent(const PipelinePlan& plan, const SimOptions& options,
                             bool wall_clock) {
    validate(plan, options);
    const std::size_t n_stages = plan.stages.size();
    const std::uint32_t batch = options.batch;

    std::vector<Channel> input_ch(n_stages);
    // Bounded queues need feedback: the producer learns when its consumer
    // started serving an older input, which is when a queue slot frees.
    std::vector<Channel> start_ch(n_stages);

    for (std::uint32_t j = 0; j < batch; ++j) input_ch[0].push(j, 0.0);

    std::vector<std::vector<TimelineEvent>> events(n_stages);
    std::vector<double> busy(n_stages, 0.0);
    double makespan = 0.0;

    auto worker = [&](std::size_t i) {
        const double service = plan.stages[i].effective_s();
        double release = 0.0;
        for (std::uint32_t j = 0; j < batch; ++j) {
            auto [input, arrive] = input_ch[i].pop();
            const double begin = std::max(arrive, release);
            if (options.queue_capacity && i > 0) start_ch[i].push(input, begin);
            const double done = begin + service;
            busy[i] += service;
            events[i].push_back({static_cast<std::uint32_t>(i), input, begin, done});
            if (wall_clock)
                std::this_thread::sleep_for(std::chrono::duration<double>(service));

            if (i + 1 < n_stages) {
                double next_arrive = done;
                if (options.queue_capacity && j >= *options.queue_capacity) {
                    auto [freed_input, freed_at] = start_ch[i + 1].pop();
                    (void)freed_input;  // inputs are in FIFO order by construction
                    next_arrive = std::max(done, freed_at);
                }
                input_ch[i + 1].push(input, next_arrive);
                release = next_arrive;
            } else {
                release = done;
                makespan = done;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(n_stages);
    for (std::size_t i = 0; i < n_stages; ++i) threads.emplace_back(worker, i);
    for (auto& t : threads) t.join();

    SimResult result;
    result.makespan_s = makespan;
    result.per_inference_s = makespan / static_cast<double>(batch);
    result.stage_busy_s = std::move(busy);
    result.bottleneck_stage = bottleneck_of(plan);
    for (auto& per_stage : events)
        result.timeline.insert(result.timeline.end(), per_stage.begin(), per_stage.end());
    return result;
}

SimResult run_pipeline(const PipelinePlan& plan, const SimOptions& options) {
    switch (options.backend) {
        case Backend::Analytic: {
            validate(plan, options);
            SimResult result;
            result.makespan_s = analytic_makespan(plan, options.batch);
            result.per_inference_s = result.makespan_s / static_cast<double>(options.batch);
            result.stage_busy_s.resize(plan.stages.size());
            for (std::size_t i = 0; i < plan.stages.size(); ++i)
                result.stage_busy_s[i] = plan.stages[i].effective_s() * options.batch;
            result.bottleneck_stage = bottleneck_of(plan);
            return result;
        }
        case Backend::Events:
            return simulate_events(plan, options);
        case Backend::Emulated:
            return emulate_concurrent(plan, options);
    }
    throw std::invalid_argument("run_pipeline: unknown backend");
}

double speedup_vs_single_input(const SimResult& batched, const SimResult& single_input) {
    if (batched.per_inference_s <= 0.0)
        throw std::invalid_argument("speedup_vs_single_input: non-positive per-inference time");
    return single_input.makespan_s / batched.per_inference_s;
}

double speedup_vs_single_device(const SimResult& result, const StageCost& single) {
    if (result.per_inference_s <= 0.0)
        throw std::invalid_argument("speedup_vs_single_device: non-positive per-inference time");
    return single.total_s() / result.per_inference_s;
}

void write_timeline_csv(std::ostream& out, const SimResult& result) {
    out << "stage,input_index,start_s,end_s\n";
    auto sorted = result.timeline;
    std::sort(sorted.begin(), sorted.end(), [](const TimelineEvent& a, const TimelineEvent& b) {
        return std::tie(a.stage, a.input) < std::tie(b.stage, b.input);
    });
    for (const auto& ev : sorted)
        out << ev.stage << ',' << ev.input << ',' << ev.start_s << ',' << ev.end_s << '\n';
}

}  // namespace edgepipe
