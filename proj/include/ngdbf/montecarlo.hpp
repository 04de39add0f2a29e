#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ngdbf/channel.hpp"
#include "ngdbf/decoder.hpp"
#include "ngdbf/refdec.hpp"
#include "ngdbf/stats.hpp"
#include "ngdbf/tanner.hpp"

namespace ngdbf {

/// Comparator convention for external semi-parallel layered decoders whose
/// iteration takes 12 clock cycles; NGDBF iterations are 1 cycle each.
inline constexpr int kLayeredOmsCyclesPerIteration = 12;

/// One SNR sweep: every frame is the all-zero codeword (all +1 after BPSK),
/// decoded with multi-phase re-decoding until the error thresholds are met.
struct CampaignConfig {
    enum class Algorithm { ngdbf, nms };

    Algorithm algorithm = Algorithm::ngdbf;
    DecoderConfig decoder;
    NmsConfig nms;
    std::string code_path;  // recorded in provenance
    double rate = 0.5;
    std::vector<double> ebn0_points;
    std::uint64_t min_bit_errors = 200;
    std::uint64_t min_word_errors = 20;
    std::uint64_t max_frames = 100'000'000;
    std::uint64_t master_seed = 1;
    int workers = 1;
    std::uint64_t batch_size = 256;

    int phases() const { return algorithm == Algorithm::ngdbf ? decoder.phi : 1; }

    void validate() const {
        if (algorithm == Algorithm::ngdbf)
            decoder.validate();
        else
            nms.validate();
        if (!(rate > 0.0 && rate <= 1.0))
            throw std::invalid_argument("CampaignConfig: rate must be in (0,1]");
        if (ebn0_points.empty())
            throw std::invalid_argument("CampaignConfig: at least one Eb/N0 point required");
        if (min_bit_errors < 1 || min_word_errors < 1)
            throw std::invalid_argument("CampaignConfig: error thresholds must be >= 1");
        if (max_frames < 1) throw std::invalid_argument("CampaignConfig: max_frames must be >= 1");
        if (batch_size < 1) throw std::invalid_argument("CampaignConfig: batch_size must be >= 1");
    }
};

/// Accumulated statistics for one (code, config, SNR) point. All aggregates
/// are integer counters; rates and intervals are derived on demand.
struct PointStats {
    double ebn0_db = 0.0;
    int n = 0;
    std::uint64_t frames = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t word_errors = 0;
    std::uint64_t undetected_word_errors = 0;
    unsigned long long total_iterations = 0;
    std::vector<std::uint64_t> phase_counts;       // completion phase, failures in the last bin
    std::vector<std::uint64_t> nested_bit_errors;  // totals as if phi were capped at p+1
    std::vector<std::uint64_t> nested_word_errors;
    bool unsaturated = false;

    double ber() const {
        return frames ? static_cast<double>(bit_errors) /
                            (static_cast<double>(frames) * static_cast<double>(n))
                      : 0.0;
    }
    double wer() const { return frames ? static_cast<double>(word_errors) / static_cast<double>(frames) : 0.0; }
    double avg_iterations() const {
        return frames ? static_cast<double>(total_iterations) / static_cast<double>(frames) : 0.0;
    }
    std::pair<double, double> ber_ci() const {
        return wilson_interval(bit_errors, frames * static_cast<std::uint64_t>(n));
    }
    std::pair<double, double> wer_ci() const { return wilson_interval(word_errors, frames); }

    double nested_ber(int phases_cap) const {
        return frames ? static_cast<double>(nested_bit_errors.at(phases_cap - 1)) /
                            (static_cast<double>(frames) * static_cast<double>(n))
                      : 0.0;
    }
};

/// Fraction of frames whose decoding terminated at each phase 1..phi; frames
/// failing every phase are folded into the final bin.
inline std::vector<double> phase_histogram(const PointStats& stats) {
    std::vector<double> fractions(stats.phase_counts.size(), 0.0);
    if (stats.frames == 0) return fractions;
    for (std::size_t p = 0; p < fractions.size(); ++p)
        fractions[p] = static_cast<double>(stats.phase_counts[p]) / static_cast<double>(stats.frames);
    return fractions;
}

namespace detail {

struct FrameOutcome {
    std::uint32_t bits_wrong = 0;
    std::int32_t completion_phase = 1;
    long long iterations = 0;
    bool success = false;
    std::vector<std::uint32_t> cut_bits;  // bits wrong had phi been capped at p+1
};

inline std::uint32_t count_wrong(const BipolarVector& out) {
    std::uint32_t wrong = 0;
    for (std::int8_t v : out.values()) wrong += v != 1;
    return wrong;
}

inline FrameOutcome decode_frame(const ParityCheckMatrix& h, const CampaignConfig& cfg,
                                 double sigma2, std::uint64_t point_seed, std::uint64_t frame) {
    NoiseStream chan(NoiseStreamKey{point_seed, frame, 0, StreamRole::channel});
    const auto c = BipolarVector::all_plus(h.symbol_count());
    const auto y = transmit(c.values(), sigma2, chan);

    FrameOutcome out;
    if (cfg.algorithm == CampaignConfig::Algorithm::nms) {
        std::vector<double> llr(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) llr[k] = 2.0 * y[k] / sigma2;
        const auto r = nms_decode(h, llr, cfg.nms);
        out.bits_wrong = count_wrong(r.output);
        out.success = r.success;
        out.iterations = r.iterations;
        out.cut_bits = {out.bits_wrong};
        return out;
    }

    const double n0 = 2.0 * sigma2;
    std::vector<std::uint32_t> phase_bits(static_cast<std::size_t>(cfg.decoder.phi), 0);
    const auto r = decode(
        h, y, n0, cfg.decoder,
        [&](int phase) {
            return NoiseStream(NoiseStreamKey{point_seed, frame, static_cast<std::uint32_t>(phase),
                                              StreamRole::perturbation});
        },
        [&](int phase, const PhaseResult& pr) { phase_bits[phase - 1] = count_wrong(pr.output); });
    out.bits_wrong = count_wrong(r.output);
    out.success = r.success;
    out.iterations = r.total_iterations;
    out.completion_phase = r.success ? r.phases_used : cfg.decoder.phi;
    out.cut_bits.resize(static_cast<std::size_t>(cfg.decoder.phi));
    for (int p = 1; p <= cfg.decoder.phi; ++p)
        out.cut_bits[p - 1] = phase_bits[std::min(p, r.phases_used) - 1];
    return out;
}

template <class Fn>
void parallel_frames(std::uint64_t begin, std::uint64_t end, int workers, Fn&& fn) {
    if (workers <= 1 || end - begin < 2) {
        for (std::uint64_t f = begin; f < end; ++f) fn(f);
        return;
    }
    std::atomic<std::uint64_t> next{begin};
    auto body = [&] {
        for (std::uint64_t f; (f = next.fetch_add(1)) < end;) fn(f);
    };
    const int count = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), end - begin));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
}

} // namespace detail

/// Derives the independent per-point seed used by sweep for point k.
inline std::uint64_t point_seed_for(std::uint64_t master_seed, std::size_t point_index) {
    return detail::splitmix64(detail::splitmix64(master_seed) ^ point_index);
}

/// Accumulate one SNR point until at least min_bit_errors and min_word_errors
/// are observed or max_frames is reached (then flagged unsaturated).
///
/// Frames are decoded in fixed-size batches, any worker interleaving, and the
/// stopping rule is applied to the frame-index-ordered prefix, so the emitted
/// statistics are bit-identical for every worker count.
inline PointStats run_point(const ParityCheckMatrix& h, const CampaignConfig& cfg, double ebn0_db,
                            std::uint64_t point_seed) {
    cfg.validate();
    const double sigma2 = ebn0_to_sigma2(ebn0_db, cfg.rate);
    const int phases = cfg.phases();

    PointStats stats;
    stats.ebn0_db = ebn0_db;
    stats.n = h.symbol_count();
    stats.phase_counts.assign(static_cast<std::size_t>(phases), 0);
    stats.nested_bit_errors.assign(static_cast<std::size_t>(phases), 0);
    stats.nested_word_errors.assign(static_cast<std::size_t>(phases), 0);

    std::vector<detail::FrameOutcome> batch(static_cast<std::size_t>(cfg.batch_size));
    for (std::uint64_t start = 0; start < cfg.max_frames; start += cfg.batch_size) {
        const std::uint64_t end = std::min(start + cfg.batch_size, cfg.max_frames);
        detail::parallel_frames(start, end, cfg.workers, [&](std::uint64_t f) {
            batch[f - start] = detail::decode_frame(h, cfg, sigma2, point_seed, f);
        });
        for (std::uint64_t f = start; f < end; ++f) {
            const auto& o = batch[f - start];
            ++stats.frames;
            stats.bit_errors += o.bits_wrong;
            stats.word_errors += o.bits_wrong > 0;
            stats.undetected_word_errors += (o.success && o.bits_wrong > 0);
            stats.total_iterations += static_cast<unsigned long long>(o.iterations);
            ++stats.phase_counts[static_cast<std::size_t>(o.completion_phase - 1)];
            for (int p = 0; p < phases; ++p) {
                stats.nested_bit_errors[p] += o.cut_bits[p];
                stats.nested_word_errors[p] += o.cut_bits[p] > 0;
            }
            if (stats.bit_errors >= cfg.min_bit_errors && stats.word_errors >= cfg.min_word_errors)
                return stats;
        }
    }
    stats.unsaturated = true;
    return stats;
}

/// Invoked after each completed point with (point_index, stats).
using PointCallback = std::function<void(std::size_t, const PointStats&)>;

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline nlohmann::json campaign_config_json(const CampaignConfig& cfg) {
    nlohmann::json j;
    j["algorithm"] = cfg.algorithm == CampaignConfig::Algorithm::ngdbf ? "ngdbf" : "nms";
    if (cfg.algorithm == CampaignConfig::Algorithm::ngdbf) {
        j["T"] = cfg.decoder.T;
        j["theta"] = cfg.decoder.theta;
        j["lambda"] = cfg.decoder.lambda;
        j["w"] = cfg.decoder.w;
        j["eta"] = cfg.decoder.eta;
        j["phi"] = cfg.decoder.phi;
        if (cfg.decoder.y_max) j["y_max"] = *cfg.decoder.y_max;
        if (cfg.decoder.smoothing_window) j["smoothing_window"] = *cfg.decoder.smoothing_window;
    } else {
        j["T"] = cfg.nms.T;
        j["alpha"] = cfg.nms.alpha;
    }
    j["code"] = cfg.code_path;
    j["rate"] = cfg.rate;
    j["ebn0_db"] = cfg.ebn0_points;
    j["min_bit_errors"] = cfg.min_bit_errors;
    j["min_word_errors"] = cfg.min_word_errors;
    j["max_frames"] = cfg.max_frames;
    j["master_seed"] = cfg.master_seed;
    j["batch_size"] = cfg.batch_size;
    return j;
}

inline nlohmann::json point_stats_json(const PointStats& s) {
    nlohmann::json j;
    j["ebn0_db"] = s.ebn0_db;
    j["n"] = s.n;
    j["frames"] = s.frames;
    j["bit_errors"] = s.bit_errors;
    j["word_errors"] = s.word_errors;
    j["undetected_word_errors"] = s.undetected_word_errors;
    j["total_iterations"] = s.total_iterations;
    j["phase_counts"] = s.phase_counts;
    j["nested_bit_errors"] = s.nested_bit_errors;
    j["nested_word_errors"] = s.nested_word_errors;
    j["unsaturated"] = s.unsaturated;
    j["ber"] = s.ber();
    j["wer"] = s.wer();
    const auto [blo, bhi] = s.ber_ci();
    j["ber_ci"] = {blo, bhi};
    const auto [wlo, whi] = s.wer_ci();
    j["wer_ci"] = {wlo, whi};
    j["avg_iterations"] = s.avg_iterations();
    return j;
}

inline PointStats point_stats_from_json(const nlohmann::json& j) {
    PointStats s;
    s.ebn0_db = j.at("ebn0_db").get<double>();
    s.n = j.at("n").get<int>();
    s.frames = j.at("frames").get<std::uint64_t>();
    s.bit_errors = j.at("bit_errors").get<std::uint64_t>();
    s.word_errors = j.at("word_errors").get<std::uint64_t>();
    s.undetected_word_errors = j.at("undetected_word_errors").get<std::uint64_t>();
    s.total_iterations = j.at("total_iterations").get<unsigned long long>();
    s.phase_counts = j.at("phase_counts").get<std::vector<std::uint64_t>>();
    s.nested_bit_errors = j.at("nested_bit_errors").get<std::vector<std::uint64_t>>();
    s.nested_word_errors = j.at("nested_word_errors").get<std::vector<std::uint64_t>>();
    s.unsaturated = j.at("unsaturated").get<bool>();
    return s;
}

/// Fingerprint over everything that determines the numbers (not workers).
inline std::uint64_t config_fingerprint(const CampaignConfig& cfg) {
    return fnv1a(campaign_config_json(cfg).dump());
}

} // namespace detail

/// Sweep every configured Eb/N0 point in order. When checkpoint_path is given,
/// completed points are persisted there and a matching interrupted sweep
/// resumes after the last finished point; per-point seeding makes the resumed
/// results bit-identical to an uninterrupted run.
inline std::vector<PointStats> sweep(const ParityCheckMatrix& h, const CampaignConfig& cfg,
                                     const std::string& checkpoint_path = {},
                                     const PointCallback& on_point = {}) {
    cfg.validate();
    std::vector<PointStats> results;

    const std::uint64_t fingerprint = detail::config_fingerprint(cfg);
    if (!checkpoint_path.empty()) {
        std::ifstream in(checkpoint_path);
        if (in) {
            nlohmann::json j = nlohmann::json::parse(in);
            if (j.at("config_fingerprint").get<std::uint64_t>() == fingerprint) {
                for (const auto& pj : j.at("points")) {
                    auto s = detail::point_stats_from_json(pj);
                    if (on_point) on_point(results.size(), s);
                    results.push_back(std::move(s));
                }
            }
        }
    }

    for (std::size_t k = results.size(); k < cfg.ebn0_points.size(); ++k) {
        auto stats = run_point(h, cfg, cfg.ebn0_points[k], point_seed_for(cfg.master_seed, k));
        if (on_point) on_point(k, stats);
        results.push_back(std::move(stats));
        if (!checkpoint_path.empty()) {
            nlohmann::json j;
            j["config_fingerprint"] = fingerprint;
            j["points"] = nlohmann::json::array();
            for (const auto& s : results) j["points"].push_back(detail::point_stats_json(s));
            std::ofstream out(checkpoint_path);
            if (!out) throw std::runtime_error("sweep: cannot write checkpoint " + checkpoint_path);
            out << j.dump(1) << "\n";
        }
    }
    return results;
}

/// Results table, one row per point:
/// ebn0_db,frames,bit_errors,word_errors,ber,wer,ber_ci_lo,ber_ci_hi,
/// avg_iterations,phase_1..phase_K,unsaturated
inline void write_results_csv(std::ostream& out, std::span<const PointStats> rows, int phases) {
    out << "ebn0_db,frames,bit_errors,word_errors,ber,wer,ber_ci_lo,ber_ci_hi,avg_iterations";
    for (int p = 1; p <= phases; ++p) out << ",phase_" << p;
    out << ",unsaturated\n";
    for (const auto& s : rows) {
        const auto [blo, bhi] = s.ber_ci();
        out << format_double(s.ebn0_db) << ',' << s.frames << ',' << s.bit_errors << ','
            << s.word_errors << ',' << format_double(s.ber()) << ',' << format_double(s.wer())
            << ',' << format_double(blo) << ',' << format_double(bhi) << ','
            << format_double(s.avg_iterations());
        const auto fractions = phase_histogram(s);
        for (int p = 0; p < phases; ++p)
            out << ',' << format_double(p < static_cast<int>(fractions.size()) ? fractions[p] : 0.0);
        out << ',' << (s.unsaturated ? 1 : 0) << '\n';
    }
}

} // namespace ngdbf
