#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "edgepipe/experiment.hpp"
#include "edgepipe/serialize.hpp"

using namespace edgepipe;

namespace {

ExperimentConfig fc_config() {
    ExperimentConfig config;
    config.sweep = default_fc_sweep();
    return config;
}

// A narrow sweep keeps segment/profile tests fast.
ExperimentConfig fc_point(std::uint64_t n) {
    ExperimentConfig config = fc_config();
    config.sweep.param_min = config.sweep.param_max = n;
    return config;
}

}  // namespace

TEST_CASE("config JSON round-trip") {
    ExperimentConfig config;
    config.sweep = default_conv_sweep();
    config.profile.reserved_bytes = 2 * 1024 * 1024;
    config.segments = {1, 3};
    config.batches = {8};
    config.partitioner.kind = PartitionerKind::Threshold;
    config.partitioner.max_diff_s = 2.5e-4;
    config.out_dir = "/tmp/x";
    config.seed = 99;
    config.enumeration_budget = 1234;

    const nlohmann::json j = config;
    const auto back = j.get<ExperimentConfig>();
    CHECK(back.sweep.kind == SweepKind::Conv);
    CHECK(back.profile.reserved_bytes == config.profile.reserved_bytes);
    CHECK(back.segments == config.segments);
    CHECK(back.batches == config.batches);
    CHECK(back.partitioner.kind == PartitionerKind::Threshold);
    CHECK(back.partitioner.max_diff_s == config.partitioner.max_diff_s);
    CHECK(back.out_dir == config.out_dir);
    CHECK(back.seed == config.seed);
    CHECK(back.enumeration_budget == config.enumeration_budget);

    nlohmann::json bad = j;
    bad["partitioner"]["kind"] = "magic";
    CHECK_THROWS_AS(bad.get<ExperimentConfig>(), std::invalid_argument);

    // missing fields fall back to defaults
    const auto sparse = nlohmann::json::object().get<ExperimentConfig>();
    CHECK(sparse.segments == std::vector<std::uint32_t>{1, 2, 3, 4});
    CHECK(sparse.batches == std::vector<std::uint32_t>{1, 50});
}

TEST_CASE("run_sweep: FC defaults") {
    const auto rows = run_sweep(fc_config());
    REQUIRE(rows.size() == 64);
    CHECK(rows.front().param == 100);
    CHECK(rows.back().param == 2620);
    std::uint32_t prev_host = 0;
    for (const auto& r : rows) {
        CHECK(r.model_id == "fc_n" + std::to_string(r.param));
        CHECK(r.host_layers >= prev_host);
        CHECK(r.gops == static_cast<double>(r.macs) / r.time_s / 1e9);
        CHECK(r.macs == r.weight_bytes);  // FC identity
        CHECK(r.on_chip_bytes + r.host_bytes == r.weight_bytes);
        prev_host = r.host_layers;
    }
}

TEST_CASE("run_sweep: min=max gives one row; CONV has 68") {
    CHECK(run_sweep(fc_point(500)).size() == 1);
    ExperimentConfig conv;
    conv.sweep = default_conv_sweep();
    CHECK(run_sweep(conv).size() == 68);
}

TEST_CASE("sweep CSV: schema and determinism") {
    const auto rows = run_sweep(fc_point(1700));
    std::ostringstream a, b;
    write_sweep_csv(a, rows);
    write_sweep_csv(b, run_sweep(fc_point(1700)));
    CHECK(a.str() == b.str());  // byte-identical re-run

    std::istringstream in(a.str());
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "model_id,param,macs,weight_bytes,on_chip_bytes,host_bytes,host_layers,time_s,gops");
    std::string row;
    std::getline(in, row);
    CHECK(row.rfind("fc_n1700,1700,", 0) == 0);
}

TEST_CASE("run_segment: s=1 matches the sweep") {
    for (std::uint64_t n : {100ull, 1700ull, 2620ull}) {
        auto config = fc_point(n);
        config.segments = {1};
        config.batches = {1};
        const auto segment_rows = run_segment(config);
        const auto sweep_rows = run_sweep(config);
        REQUIRE(segment_rows.size() == 1);
        // s=1 adds the io round-trip already counted in the sweep's stage cost
        CHECK(segment_rows[0].makespan_s == doctest::Approx(sweep_rows[0].time_s).epsilon(1e-15));
        CHECK(segment_rows[0].partition == "5");
        CHECK(segment_rows[0].speedup_vs_1tpu == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(segment_rows[0].speedup_vs_b1 == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("run_segment: even-split s=2 and s=3 per-inference agree within 5%") {
    auto config = fc_point(1940);
    config.segments = {2, 3};
    config.batches = {50};
    const auto rows = run_segment(config);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].partition == "2-3");
    CHECK(rows[1].partition == "1-2-2");
    CHECK(std::abs(rows[0].per_inference_s - rows[1].per_inference_s) /
              rows[0].per_inference_s <
          0.05);
}

TEST_CASE("run_segment: batching speeds up the pipeline, CSV schema") {
    auto config = fc_point(2620);
    config.segments = {4};
    config.batches = {1, 50};
    config.partitioner.kind = PartitionerKind::Exhaustive;
    const auto rows = run_segment(config);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].batch == 1);
    CHECK(rows[1].batch == 50);
    CHECK(rows[1].speedup_vs_b1 > 1.0);
    CHECK(rows[1].fully_on_chip);
    CHECK(rows[1].speedup_vs_1tpu > 10.0);  // the spilled model gains the most

    std::ostringstream out;
    write_segment_csv(out, rows);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "model_id,param,s,partition,batch,per_inference_s,makespan_s,fully_on_chip,"
          "speedup_vs_b1,speedup_vs_1tpu");
}

TEST_CASE("run_profile: all partitions ranked, picks marked") {
    const auto report = run_profile(fc_point(1700), "fc_n1700", 3);
    CHECK(report.at("model_id") == "fc_n1700");
    CHECK(report.at("batch") == 50);
    const auto& partitions = report.at("partitions");
    REQUIRE(partitions.size() == 6);  // C(4,2)

    double prev = 0.0;
    int even_marks = 0, threshold_marks = 0;
    double even_makespan = 0.0;
    for (const auto& entry : partitions) {
        const double makespan = entry.at("batch_makespan_s").get<double>();
        CHECK(makespan >= prev);
        prev = makespan;
        if (entry.at("is_even_split").get<bool>()) {
            ++even_marks;
            even_makespan = makespan;
        }
        if (entry.at("is_threshold_pick").get<bool>()) ++threshold_marks;
    }
    CHECK(even_marks == 1);
    CHECK(threshold_marks == 1);
    CHECK(partitions.front().at("batch_makespan_s").get<double>() <= even_makespan);

    // s = layer count: the single all-ones partition
    const auto trivial = run_profile(fc_point(1700), "fc_n1700", 5);
    REQUIRE(trivial.at("partitions").size() == 1);
    CHECK(trivial.at("partitions")[0].at("partition") == "1-1-1-1-1");

    CHECK_THROWS_AS(run_profile(fc_point(1700), "fc_n9999", 3), std::invalid_argument);
    CHECK_THROWS_AS(run_profile(fc_point(1700), "fc_n1700", 9), std::invalid_argument);
    auto tight = fc_point(1700);
    tight.enumeration_budget = 2;
    CHECK_THROWS_AS(run_profile(tight, "fc_n1700", 3), EnumerationBudgetError);
}

TEST_CASE("read_measured_csv") {
    std::istringstream with_header("param,time_s\n100,0.001\n200,0.002\n");
    auto m = read_measured_csv(with_header);
    REQUIRE(m.size() == 2);
    CHECK(m[0].param == 100);
    CHECK(m[1].time_s == 0.002);

    std::istringstream bare("100,0.001\n\n200,0.002\n");
    CHECK(read_measured_csv(bare).size() == 2);

    std::istringstream bad("param,time_s\n100,0.001\nhello,world\n");
    try {
        read_measured_csv(bad);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    std::istringstream negative("100,-0.5\n");
    CHECK_THROWS_AS(read_measured_csv(negative), std::runtime_error);
}

TEST_CASE("calibrate: round-trip recovers the generating profile") {
    // Synthesize measurements with the default profile, then search from a
    // config whose starting profile is deliberately wrong on every axis.
    const AcceleratorProfile truth;
    ExperimentConfig config = fc_config();
    std::vector<Measurement> measured;
    for (std::uint64_t n : {100ull, 500ull, 1000ull, 1540ull, 1700ull, 1900ull, 2300ull, 2620ull}) {
        const ModelSpec model = build_fc_model(config.sweep, n);
        measured.push_back({n, single_device_time(model, truth).total_s()});
    }
    config.profile.effective_onchip_bw_bytes_per_s = 1e9;
    config.profile.pcie_bw_bytes_per_s = 8e8;
    config.profile.pcie_latency_s = 0.0;
    config.profile.reserved_bytes = 0;

    const auto result = calibrate(measured, config);
    CHECK(result.profile.effective_onchip_bw_bytes_per_s ==
          truth.effective_onchip_bw_bytes_per_s);
    CHECK(result.profile.pcie_bw_bytes_per_s == truth.pcie_bw_bytes_per_s);
    CHECK(result.profile.pcie_latency_s == truth.pcie_latency_s);
    CHECK(result.profile.reserved_bytes == truth.reserved_bytes);
    CHECK(result.sse_log == doctest::Approx(0.0).epsilon(1e-18));
    CHECK_FALSE(result.degenerate);
    REQUIRE(result.residuals.size() == measured.size());
    for (double r : result.residuals) CHECK(std::abs(r) < 1e-12);
}

TEST_CASE("calibrate: degenerate and under-determined inputs") {
    ExperimentConfig config = fc_config();
    const std::vector<Measurement> constant = {{100, 0.5}, {500, 0.5}, {900, 0.5}};
    CHECK(calibrate(constant, config).degenerate);

    CHECK_THROWS_AS(calibrate({{100, 0.5}}, config), std::invalid_argument);
    CHECK_THROWS_AS(calibrate({}, config), std::invalid_argument);
}

TEST_CASE("systolic_report") {
    const auto report = systolic_report(3, 3, 1e6, 3, 3, 1, /*seed=*/7);
    CHECK(report.at("report").at("total_cycles") == 5);
    CHECK(report.at("report").at("utilization").get<double>() <= 1.0);
    CHECK(report.at("peak_ops_per_second") == 18e6);

    // same seed, same bits; different seed, different data
    CHECK(systolic_report(3, 3, 1e6, 3, 3, 1, 7) == report);
    const auto big = systolic_report(64, 64, 480e6, 128, 128, 4, 0);
    CHECK(big.at("peak_ops_per_second") == 3'932'160'000'000.0);
}
