#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <sstream>

#include "ngdbf/archive.hpp"
#include "ngdbf/trapset.hpp"

using namespace ngdbf;

TEST_CASE("ts88 graph structure matches the absorbing-set adjacency") {
    const auto h = ts88_graph();
    REQUIRE(h.symbol_count() == 8);
    REQUIRE(h.check_count() == 28);
    int deg1 = 0, deg2 = 0;
    for (int i = 0; i < h.check_count(); ++i) {
        if (h.check_degree(i) == 1) ++deg1;
        if (h.check_degree(i) == 2) ++deg2;
    }
    CHECK(deg1 == 8);
    CHECK(deg2 == 20);
    for (int j = 0; j < 8; ++j) CHECK(h.symbol_degree(j) == 6);
    CHECK(h.transpose_consistent());
    CHECK(is_codeword(h, BipolarVector::all_plus(8)));
}

TEST_CASE("all-error state: degree-2 checks satisfied, degree-1 unsatisfied") {
    const auto h = ts88_graph();
    const std::vector<std::int8_t> x(8, -1);
    const auto s = syndrome(h, x);
    for (int i = 0; i < h.check_count(); ++i) {
        // exhaustive product per check, from first principles
        const std::int8_t expected = h.check_degree(i) == 2 ? 1 : -1;
        CHECK(s[i] == expected);
    }
}

TEST_CASE("all-error state is effectively stable: E_k = -y_k + 4w > 0") {
    const auto h = ts88_graph();
    const std::vector<std::int8_t> x(8, -1);
    std::vector<double> y(8);
    NoiseStream chan(NoiseStreamKey{5, 0, 0, StreamRole::channel});
    for (auto& v : y) v = 1.0 + chan.gaussian();
    const auto s = syndrome(h, x);
    const std::vector<double> q(8, 0.0);
    const auto e = compute_inversions(h, x, y, s, 1.0, q);
    for (int k = 0; k < 8; ++k) {
        CHECK_THAT(e[k], Catch::Matchers::WithinAbs(-y[k] + 4.0, 1e-12));
        if (y[k] < 4.0) CHECK(e[k] > 0.0);
    }
}

TEST_CASE("run_trial: vanishing noise succeeds at iteration 0") {
    TrapsetExperimentConfig cfg;
    cfg.sigma = 1e-9;
    const auto r = run_trial(cfg, 1, 0);
    CHECK(r.success);
    CHECK(r.first_correct_iteration == 0);
    CHECK(r.y.size() == 8);
}

TEST_CASE("GDBF replay of any initial condition is deterministic") {
    TrapsetExperimentConfig cfg;
    cfg.sigma = 1.0;
    cfg.eta = 0.0;
    cfg.record_trajectories = true;
    const auto first = run_trial(cfg, 21, 4);
    NoiseStream p1(NoiseStreamKey{999, 0, 1, StreamRole::perturbation});
    NoiseStream p2(NoiseStreamKey{123, 9, 3, StreamRole::perturbation});
    const auto r1 = replay(first.y, cfg, p1);
    const auto r2 = replay(first.y, cfg, p2);
    CHECK(r1.success == first.success);
    CHECK(r1.trajectory == first.trajectory);
    CHECK(r2.trajectory == first.trajectory);
}

TEST_CASE("NGDBF replay with the original stream key is bit-identical") {
    TrapsetExperimentConfig cfg;
    cfg.sigma = 1.0;
    cfg.record_trajectories = true;
    const std::uint64_t seed = 33, trial = 7;
    const auto orig = run_trial(cfg, seed, trial);
    NoiseStream pert(NoiseStreamKey{seed, trial, 1, StreamRole::perturbation});
    const auto again = replay(orig.y, cfg, pert);
    CHECK(again.success == orig.success);
    CHECK(again.first_correct_iteration == orig.first_correct_iteration);
    CHECK(again.trajectory == orig.trajectory);
    CHECK(again.y == orig.y);
}

TEST_CASE("sigma=1: NGDBF fails less often than GDBF on paired trials") {
    TrapsetExperimentConfig ngdbf_cfg;
    ngdbf_cfg.sigma = 1.0;
    ngdbf_cfg.trials = 10'000;
    auto gdbf_cfg = ngdbf_cfg;
    gdbf_cfg.eta = 0.0;
    const auto rn = failure_rate(ngdbf_cfg, 2025);
    const auto rg = failure_rate(gdbf_cfg, 2025); // same seed: same channel draws
    INFO("ngdbf failures " << rn.failures << " gdbf failures " << rg.failures);
    CHECK(rn.failures < rg.failures);
    CHECK(rg.failures > 0);
}

TEST_CASE("sigma=0.6: NGDBF failures are rare") {
    TrapsetExperimentConfig cfg;
    cfg.sigma = 0.6;
    cfg.trials = 2'000;
    const auto r = failure_rate(cfg, 7);
    CHECK(r.failures <= 2);
}

TEST_CASE("failure_rate: all-success config gives rate 0 with a proper interval") {
    TrapsetExperimentConfig cfg;
    cfg.sigma = 1e-9;
    cfg.trials = 500;
    const auto r = failure_rate(cfg, 3);
    CHECK(r.failures == 0);
    CHECK(r.rate == 0.0);
    CHECK(r.ci_lo == 0.0);
    CHECK(r.ci_hi > 0.0);
    CHECK(r.ci_hi < 0.02);
}

TEST_CASE("failure_rate counts do not depend on the worker split") {
    TrapsetExperimentConfig cfg;
    cfg.sigma = 1.0;
    cfg.trials = 3'000;
    const auto a = failure_rate(cfg, 55, 1);
    const auto b = failure_rate(cfg, 55, 3);
    const auto c = failure_rate(cfg, 55, 7);
    CHECK(a.failures == b.failures);
    CHECK(a.failures == c.failures);
}

TEST_CASE("wilson interval width shrinks like 1/sqrt(n)") {
    const auto [lo1, hi1] = wilson_interval(50, 1000);
    const auto [lo2, hi2] = wilson_interval(100, 2000);
    const double ratio = (hi2 - lo2) / (hi1 - lo1);
    CHECK_THAT(ratio, Catch::Matchers::WithinAbs(1.0 / std::sqrt(2.0), 0.02));
    CHECK(lo1 < 0.05);
    CHECK(hi1 > 0.05);
}

TEST_CASE("collect_failures archives replayable cases") {
    TrapsetExperimentConfig cfg;
    cfg.sigma = 1.0;
    const auto cases = collect_failures(cfg, 77, 5, 200'000);
    REQUIRE(cases.size() == 5);
    for (const auto& c : cases) {
        // the stored keys reproduce the failing run exactly
        NoiseStream pert(NoiseStreamKey{c.master_seed, c.trial_index, 1, StreamRole::perturbation});
        const auto r = replay(c.y, cfg, pert);
        CHECK_FALSE(r.success);
    }

    const std::string path = "trapset_archive_test.json";
    archive_save(path, cases);
    const auto loaded = archive_load(path);
    REQUIRE(loaded.size() == cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) {
        CHECK(loaded[i].y == cases[i].y);
        CHECK(loaded[i].master_seed == cases[i].master_seed);
        CHECK(loaded[i].trial_index == cases[i].trial_index);
    }
    std::remove(path.c_str());
}

TEST_CASE("trajectory CSV layout: one header row then E_1..E_8 per iteration") {
    TrapsetExperimentConfig cfg;
    cfg.sigma = 1.0;
    cfg.record_trajectories = true;
    const auto r = run_trial(cfg, 4, 2);
    REQUIRE(r.trajectory.size() == static_cast<std::size_t>(cfg.T));
    std::ostringstream out;
    write_trajectory_csv(out, "ngdbf", cfg, r);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line.find("algorithm=ngdbf") == 0);
    CHECK(line.find("sigma=1") != std::string::npos);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 7);
    }
    CHECK(rows == cfg.T);
}
