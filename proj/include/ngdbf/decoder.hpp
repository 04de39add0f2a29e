#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ngdbf/channel.hpp"
#include "ngdbf/tanner.hpp"

namespace ngdbf {

/// Knobs of the GDBF/NGDBF decoder family.
///
/// eta = 0 with w = 1 and lambda = 1 is plain multi-bit GDBF. smoothing_window
/// enables the up/down output counter over the final W iterations (SM-NGDBF);
/// the smoothed decision sign(X) is the fallback output of an exhausted phase.
struct DecoderConfig {
    int T = 100;                          // max iterations per phase
    double theta = -0.6;                  // initial flip threshold, < 0
    double lambda = 1.0;                  // threshold adaptation factor, (0,1]
    double w = 1.0;                       // syndrome weight
    double eta = 0.0;                     // perturbation scale, [0,1]
    std::optional<double> y_max;          // sample saturation magnitude
    std::optional<int> smoothing_window;  // W, counter active for final W iterations
    int phi = 1;                          // max re-decoding phases

    void validate() const {
        if (T < 1) throw std::invalid_argument("DecoderConfig: T must be >= 1");
        if (!(theta < 0.0)) throw std::invalid_argument("DecoderConfig: theta must be negative");
        if (!(lambda > 0.0 && lambda <= 1.0))
            throw std::invalid_argument("DecoderConfig: lambda must be in (0,1]");
        if (!(eta >= 0.0 && eta <= 1.0))
            throw std::invalid_argument("DecoderConfig: eta must be in [0,1]");
        if (phi < 1) throw std::invalid_argument("DecoderConfig: phi must be >= 1");
        if (y_max && !(*y_max > 0.0))
            throw std::invalid_argument("DecoderConfig: y_max must be positive");
        if (smoothing_window && (*smoothing_window < 1 || *smoothing_window > T))
            throw std::invalid_argument("DecoderConfig: smoothing_window must be in [1,T]");
    }
};

/// Mutable per-phase state: decisions x, local thresholds theta_k, and the
/// output smoothing counters X_k. t counts completed flip iterations.
struct DecoderState {
    std::vector<std::int8_t> x;
    std::vector<double> theta_k;
    std::vector<std::int32_t> counters;
    int t = 0;

    static DecoderState init(std::span<const double> y, double theta) {
        DecoderState st;
        st.x.resize(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) st.x[k] = y[k] < 0.0 ? -1 : 1;
        st.theta_k.assign(y.size(), theta);
        st.counters.assign(y.size(), 0);
        return st;
    }
};

struct PhaseResult {
    bool success = false;
    BipolarVector output;
    int iterations = 0;
    bool used_smoothed = false;
};

struct DecodeResult {
    bool success = false;
    BipolarVector output;
    int phases_used = 0;
    long long total_iterations = 0;
};

/// Clamp every sample magnitude to y_max.
inline std::vector<double> saturate(std::span<const double> y, double y_max) {
    if (!(y_max > 0.0)) throw std::invalid_argument("saturate: y_max must be positive");
    std::vector<double> out(y.begin(), y.end());
    for (double& v : out) v = std::clamp(v, -y_max, y_max);
    return out;
}

/// q_k ~ N(0, eta^2 N0/2) i.i.d.; eta = 0 yields exact zeros and leaves the
/// stream untouched, so GDBF configurations are stream-independent.
inline void sample_perturbations_into(std::span<double> q, double eta, double n0,
                                      NoiseStream& stream) {
    if (eta < 0.0) throw std::invalid_argument("sample_perturbations: eta must be >= 0");
    if (!(n0 > 0.0)) throw std::invalid_argument("sample_perturbations: n0 must be positive");
    if (eta == 0.0) {
        std::fill(q.begin(), q.end(), 0.0);
        return;
    }
    const double sd = eta * std::sqrt(n0 / 2.0);
    for (double& v : q) v = sd * stream.gaussian();
}

inline std::vector<double> sample_perturbations(int n, double eta, double n0,
                                                NoiseStream& stream) {
    std::vector<double> q(static_cast<std::size_t>(n));
    sample_perturbations_into(q, eta, n0, stream);
    return q;
}

/// E_k = x_k y_k + w * sum_{i in M(k)} s_i + q_k. s must be the syndrome of x.
inline void compute_inversions_into(const ParityCheckMatrix& h, std::span<const std::int8_t> x,
                                    std::span<const double> y, std::span<const std::int8_t> s,
                                    double w, std::span<const double> q, std::span<double> e) {
    const auto n = static_cast<std::size_t>(h.symbol_count());
    if (x.size() != n || y.size() != n || q.size() != n || e.size() != n ||
        s.size() != static_cast<std::size_t>(h.check_count()))
        throw std::invalid_argument("compute_inversions: length mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        int ssum = 0;
        for (std::int32_t i : h.symbol_neighbors(static_cast<int>(k))) ssum += s[i];
        e[k] = static_cast<double>(x[k]) * y[k] + w * static_cast<double>(ssum) + q[k];
    }
}

inline std::vector<double> compute_inversions(const ParityCheckMatrix& h,
                                              std::span<const std::int8_t> x,
                                              std::span<const double> y,
                                              std::span<const std::int8_t> s, double w,
                                              std::span<const double> q) {
    std::vector<double> e(x.size());
    compute_inversions_into(h, x, y, s, w, q, e);
    return e;
}

/// One parallel bit-flip step: every symbol is judged against the pre-update
/// state. E_k < theta_k flips x_k and keeps theta_k; otherwise theta_k decays
/// by lambda. Flipped symbol indices are appended to *flipped when given.
inline void flip_and_adapt(DecoderState& state, std::span<const double> e, double lambda,
                           std::vector<std::int32_t>* flipped = nullptr) {
    if (e.size() != state.x.size()) throw std::invalid_argument("flip_and_adapt: length mismatch");
    if (flipped) flipped->clear();
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] < state.theta_k[k]) {
            state.x[k] = static_cast<std::int8_t>(-state.x[k]);
            if (flipped) flipped->push_back(static_cast<std::int32_t>(k));
        } else {
            state.theta_k[k] *= lambda;
        }
    }
}

namespace detail {

struct NoIterationObserver {
    void operator()(const DecoderState&, std::span<const double>) const {}
};

struct NoPhaseObserver {
    void operator()(int, const PhaseResult&) const {}
};

} // namespace detail

/// One decoding phase: Step 0 initialization, then up to T iterations of
/// syndrome check, inversion functions with fresh perturbations, and parallel
/// flips. The parity check precedes the flip, so a phase that starts on a
/// codeword reports 0 iterations. An exhausted phase without smoothing fails
/// with the raw x; with smoothing it answers sign(X) and succeeds iff that
/// smoothed decision is a codeword.
///
/// The observer is invoked after every completed iteration with the state and
/// that iteration's inversion values.
template <class IterationObserver = detail::NoIterationObserver>
PhaseResult decode_phase(const ParityCheckMatrix& h, std::span<const double> y, double n0,
                         const DecoderConfig& cfg, NoiseStream& perturbations,
                         IterationObserver&& observe = {}) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(h.symbol_count());
    if (y.size() != n) throw std::invalid_argument("decode_phase: y length != n");

    std::vector<double> y_sat;
    std::span<const double> yv = y;
    if (cfg.y_max) {
        y_sat = saturate(y, *cfg.y_max);
        yv = y_sat;
    }

    DecoderState state = DecoderState::init(yv, cfg.theta);
    std::vector<std::int8_t> s(static_cast<std::size_t>(h.check_count()));
    syndrome_into(h, state.x, s);
    int unsat = 0;
    for (std::int8_t si : s) unsat += si < 0;

    std::vector<double> e(n), q(n, 0.0);
    std::vector<std::int32_t> flipped;
    const bool smoothing = cfg.smoothing_window.has_value();
    const int window_start = smoothing ? cfg.T - *cfg.smoothing_window : cfg.T;

    for (int it = 0; it < cfg.T; ++it) {
        if (unsat == 0)
            return {true, BipolarVector(std::move(state.x)), it, false};

        sample_perturbations_into(q, cfg.eta, n0, perturbations);
        compute_inversions_into(h, state.x, yv, s, cfg.w, q, e);
        flip_and_adapt(state, e, cfg.lambda, &flipped);
        for (std::int32_t k : flipped) {
            for (std::int32_t i : h.symbol_neighbors(k)) {
                s[i] = static_cast<std::int8_t>(-s[i]);
                unsat += s[i] < 0 ? 1 : -1;
            }
        }
        state.t = it + 1;
        if (it >= window_start)
            for (std::size_t k = 0; k < n; ++k) state.counters[k] += state.x[k];
        observe(static_cast<const DecoderState&>(state), std::span<const double>(e));
    }

    if (smoothing) {
        std::vector<std::int8_t> smoothed(n);
        for (std::size_t k = 0; k < n; ++k) smoothed[k] = state.counters[k] < 0 ? -1 : 1;
        const bool ok = is_codeword(h, smoothed);
        return {ok, BipolarVector(std::move(smoothed)), cfg.T, true};
    }
    return {false, BipolarVector(std::move(state.x)), cfg.T, false};
}

/// Multi-phase re-decoding: run decode_phase on the identical y up to phi
/// times, resetting all decoder state each phase and drawing the perturbation
/// stream for phase p from stream_factory(p), p = 1..phi. Stops at the first
/// successful phase; after phi failures the last phase's decision is kept.
/// total_iterations sums the iterations of every executed phase.
template <class StreamFactory, class PhaseObserver = detail::NoPhaseObserver>
DecodeResult decode(const ParityCheckMatrix& h, std::span<const double> y, double n0,
                    const DecoderConfig& cfg, StreamFactory&& stream_factory,
                    PhaseObserver&& observe_phase = {}) {
    cfg.validate();
    long long total = 0;
    PhaseResult last;
    for (int phase = 1; phase <= cfg.phi; ++phase) {
        NoiseStream stream = stream_factory(phase);
        last = decode_phase(h, y, n0, cfg, stream);
        total += last.iterations;
        observe_phase(phase, static_cast<const PhaseResult&>(last));
        if (last.success) return {true, std::move(last.output), phase, total};
    }
    return {false, std::move(last.output), cfg.phi, total};
}

} // namespace ngdbf
