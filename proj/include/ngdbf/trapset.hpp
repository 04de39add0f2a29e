#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ngdbf/channel.hpp"
#include "ngdbf/decoder.hpp"
#include "ngdbf/stats.hpp"
#include "ngdbf/tanner.hpp"

namespace ngdbf {

inline constexpr int kTs88Symbols = 8;

/// The dominant (8,8) absorbing set of the 802.3an 10GBASE-T code as an
/// induced subgraph: 8 symbols, one degree-1 check per symbol and 20 degree-2
/// checks, every symbol of degree 6. Degree-1 checks stand for checks whose
/// outside neighbors are pinned correct, so their syndrome is just x_j.
inline ParityCheckMatrix ts88_graph() {
    static constexpr std::array<std::pair<int, int>, 20> kPairs{{
        {0, 1}, {0, 2}, {0, 3}, {0, 6}, {0, 7},
        {1, 2}, {1, 3}, {1, 6}, {1, 7},
        {2, 3}, {2, 4}, {2, 5},
        {3, 4}, {3, 5},
        {4, 5}, {4, 6}, {4, 7},
        {5, 6}, {5, 7},
        {6, 7},
    }};
    std::vector<std::vector<std::int32_t>> rows;
    rows.reserve(28);
    for (int j = 0; j < kTs88Symbols; ++j) rows.push_back({j});
    for (auto [a, b] : kPairs) rows.push_back({a, b});
    return ParityCheckMatrix::from_check_lists(kTs88Symbols, rows);
}

/// Localized simulation settings. The decoder subset mirrors DecoderConfig;
/// the perturbation variance is derived from the channel as N0 = 2 sigma^2
/// since the subgraph has no code rate of its own.
struct TrapsetExperimentConfig {
    double sigma = 1.0;
    int T = 100;
    double theta = -0.525;
    double lambda = 1.0;
    double w = 1.0;
    double eta = 1.0;
    std::uint64_t trials = 10'000;
    bool record_trajectories = false;

    void validate() const {
        if (!(sigma > 0.0)) throw std::invalid_argument("TrapsetExperimentConfig: sigma must be > 0");
        if (trials < 1) throw std::invalid_argument("TrapsetExperimentConfig: trials must be >= 1");
        if (T < 1) throw std::invalid_argument("TrapsetExperimentConfig: T must be >= 1");
        if (!(theta < 0.0)) throw std::invalid_argument("TrapsetExperimentConfig: theta must be negative");
        if (!(lambda > 0.0 && lambda <= 1.0))
            throw std::invalid_argument("TrapsetExperimentConfig: lambda must be in (0,1]");
        if (!(eta >= 0.0 && eta <= 1.0))
            throw std::invalid_argument("TrapsetExperimentConfig: eta must be in [0,1]");
    }
};

/// Outcome of one localized trial. A trial succeeds if x equals the correct
/// state (all +1) at any iteration, including the initial hard decision; the
/// run never stops on parity satisfaction. y is kept so failures can be
/// replayed with fresh perturbations.
struct TrialResult {
    bool success = false;
    std::optional<int> first_correct_iteration;
    std::vector<std::array<double, kTs88Symbols>> trajectory;
    std::vector<double> y;
};

namespace detail {

inline TrialResult trapset_run(std::vector<double> y, const TrapsetExperimentConfig& cfg,
                               NoiseStream& perturbations) {
    cfg.validate();
    if (y.size() != static_cast<std::size_t>(kTs88Symbols))
        throw std::invalid_argument("trapset: y must have length 8");
    const ParityCheckMatrix& h = ts88_graph();
    const double n0 = 2.0 * cfg.sigma * cfg.sigma;

    TrialResult result;
    result.y = y;
    DecoderState state = DecoderState::init(result.y, cfg.theta);
    auto all_correct = [&state] {
        for (std::int8_t v : state.x)
            if (v != 1) return false;
        return true;
    };
    if (all_correct()) result.first_correct_iteration = 0;

    std::vector<std::int8_t> s(static_cast<std::size_t>(h.check_count()));
    std::vector<double> e(kTs88Symbols), q(kTs88Symbols, 0.0);
    for (int t = 1; t <= cfg.T; ++t) {
        if (result.first_correct_iteration && !cfg.record_trajectories) break;
        syndrome_into(h, state.x, s);
        sample_perturbations_into(q, cfg.eta, n0, perturbations);
        compute_inversions_into(h, state.x, result.y, s, cfg.w, q, e);
        if (cfg.record_trajectories) {
            std::array<double, kTs88Symbols> row;
            std::copy(e.begin(), e.end(), row.begin());
            result.trajectory.push_back(row);
        }
        flip_and_adapt(state, e, cfg.lambda);
        if (!result.first_correct_iteration && all_correct())
            result.first_correct_iteration = t;
    }
    result.success = result.first_correct_iteration.has_value();
    return result;
}

} // namespace detail

/// Draw y = 1 + z over the 8 symbols, z ~ N(0, sigma^2), and run the
/// configured algorithm on the (8,8) subgraph.
inline TrialResult run_trial(const TrapsetExperimentConfig& cfg, NoiseStream& channel,
                             NoiseStream& perturbations) {
    std::vector<double> y(kTs88Symbols);
    for (double& v : y) v = 1.0 + cfg.sigma * channel.gaussian();
    return detail::trapset_run(std::move(y), cfg, perturbations);
}

inline TrialResult run_trial(const TrapsetExperimentConfig& cfg, std::uint64_t master_seed,
                             std::uint64_t trial_index) {
    NoiseStream channel(NoiseStreamKey{master_seed, trial_index, 0, StreamRole::channel});
    NoiseStream pert(NoiseStreamKey{master_seed, trial_index, 1, StreamRole::perturbation});
    return run_trial(cfg, channel, pert);
}

/// Re-run a stored initial condition with a fresh (or replayed) perturbation
/// stream. GDBF replays are bit-identical to the original; NGDBF replays
/// differ only in the perturbations.
inline TrialResult replay(std::span<const double> y, const TrapsetExperimentConfig& cfg,
                          NoiseStream& perturbations) {
    return detail::trapset_run(std::vector<double>(y.begin(), y.end()), cfg, perturbations);
}

struct RateEstimate {
    std::uint64_t failures = 0;
    std::uint64_t trials = 0;
    double rate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

/// Monte Carlo failure probability with a 95% Wilson interval. Trials are
/// keyed by (master_seed, trial_index), so GDBF/NGDBF configurations run with
/// the same seed share channel samples (paired comparison) and the counts do
/// not depend on the worker split.
inline RateEstimate failure_rate(const TrapsetExperimentConfig& cfg, std::uint64_t master_seed,
                                 int workers = 1) {
    cfg.validate();
    auto count_range = [&cfg, master_seed](std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t failures = 0;
        for (std::uint64_t i = lo; i < hi; ++i) failures += !run_trial(cfg, master_seed, i).success;
        return failures;
    };
    std::uint64_t failures = 0;
    if (workers <= 1) {
        failures = count_range(0, cfg.trials);
    } else {
        const auto w = static_cast<std::uint64_t>(workers);
        std::vector<std::uint64_t> partial(w, 0);
        std::vector<std::thread> pool;
        for (std::uint64_t t = 0; t < w; ++t)
            pool.emplace_back([&, t] {
                partial[t] = count_range(cfg.trials * t / w, cfg.trials * (t + 1) / w);
            });
        for (auto& th : pool) th.join();
        for (std::uint64_t f : partial) failures += f;
    }
    RateEstimate est;
    est.failures = failures;
    est.trials = cfg.trials;
    est.rate = static_cast<double>(failures) / static_cast<double>(cfg.trials);
    std::tie(est.ci_lo, est.ci_hi) = wilson_interval(failures, cfg.trials);
    return est;
}

/// A failing initial condition plus the keys that produced it.
struct FailedCase {
    std::vector<double> y;
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
};

/// Scan trials in order and keep failing initial conditions until `wanted`
/// are collected or `max_trials` scanned.
inline std::vector<FailedCase> collect_failures(const TrapsetExperimentConfig& cfg,
                                                std::uint64_t master_seed, std::size_t wanted,
                                                std::uint64_t max_trials) {
    std::vector<FailedCase> out;
    for (std::uint64_t i = 0; i < max_trials && out.size() < wanted; ++i) {
        const auto r = run_trial(cfg, master_seed, i);
        if (!r.success) out.push_back({r.y, master_seed, i});
    }
    return out;
}

/// Trajectory dump: one parameter header row, then one row of E_1..E_8 per
/// iteration.
inline void write_trajectory_csv(std::ostream& out, const std::string& algorithm,
                                 const TrapsetExperimentConfig& cfg, const TrialResult& trial) {
    out << "algorithm=" << algorithm << ",sigma=" << format_double(cfg.sigma) << ",T=" << cfg.T
        << ",theta=" << format_double(cfg.theta) << ",lambda=" << format_double(cfg.lambda)
        << ",w=" << format_double(cfg.w) << ",eta=" << format_double(cfg.eta) << "\n";
    for (const auto& row : trial.trajectory) {
        for (std::size_t k = 0; k < row.size(); ++k)
            out << (k ? "," : "") << format_double(row[k]);
        out << "\n";
    }
}

} // namespace ngdbf
