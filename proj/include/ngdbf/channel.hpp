#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace ngdbf {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Which independent noise source a stream feeds.
enum class StreamRole : std::uint64_t {
    channel = 0x6368616eULL,      // frame sample noise
    perturbation = 0x70657274ULL, // decoder inversion-function noise
};

/// Addresses one reproducible noise stream inside a campaign. Streams with
/// distinct keys are statistically independent; equal keys replay bit-identically.
/// phase_index 0 is reserved for channel noise; re-decoding phases count from 1,
/// so every phase of a frame sees the same received vector but fresh perturbations.
struct NoiseStreamKey {
    std::uint64_t master_seed = 0;
    std::uint64_t frame_index = 0;
    std::uint32_t phase_index = 0;
    StreamRole role = StreamRole::channel;
};

/// Deterministic stream of standard Gaussian variates.
///
/// Box-Muller over mt19937_64 keeps the variate sequence identical across
/// platforms and standard libraries, which the reproducibility contract needs
/// (std::normal_distribution is implementation-defined).
class NoiseStream {
public:
    explicit NoiseStream(const NoiseStreamKey& key) : rng_(derive_seed(key)) {}

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53; // (0,1]
        const double u2 = static_cast<double>(rng_() >> 11) * 0x1p-53;         // [0,1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    void fill_gaussian(std::span<double> out) {
        for (double& v : out) v = gaussian();
    }

    static std::uint64_t derive_seed(const NoiseStreamKey& key) {
        std::uint64_t h = detail::splitmix64(key.master_seed);
        h = detail::splitmix64(h ^ key.frame_index);
        h = detail::splitmix64(h ^ key.phase_index);
        h = detail::splitmix64(h ^ static_cast<std::uint64_t>(key.role));
        return h;
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline NoiseStream make_stream(const NoiseStreamKey& key) { return NoiseStream(key); }

/// rate may be 1 for degenerate test setups; real codes satisfy rate < 1.
inline double ebn0_to_sigma2(double ebn0_db, double rate) {
    if (!(rate > 0.0 && rate <= 1.0))
        throw std::invalid_argument("ebn0_to_sigma2: rate must be in (0,1]");
    const double n0 = 1.0 / (rate * std::pow(10.0, ebn0_db / 10.0));
    return n0 / 2.0;
}

/// AWGN channel parameters for unit-energy BPSK: Eb = 1/rate, so
/// N0 = 1/(rate * 10^(EbN0_dB/10)) and the per-sample variance is N0/2.
struct ChannelParams {
    double ebn0_db = 0.0;
    double rate = 0.5;
    double n0 = 0.0;
    double sigma2 = 0.0;

    static ChannelParams from_ebn0(double ebn0_db, double rate) {
        ChannelParams p;
        p.ebn0_db = ebn0_db;
        p.rate = rate;
        p.sigma2 = ebn0_to_sigma2(ebn0_db, rate);
        p.n0 = 2.0 * p.sigma2;
        return p;
    }
};

/// y = c + z, z ~ N(0, sigma2) i.i.d. sigma2 = 0 passes samples through exactly.
inline std::vector<double> transmit(std::span<const std::int8_t> c, double sigma2,
                                    NoiseStream& stream) {
    if (sigma2 < 0.0) throw std::invalid_argument("transmit: sigma2 must be >= 0");
    std::vector<double> y(c.size());
    if (sigma2 == 0.0) {
        for (std::size_t k = 0; k < c.size(); ++k) y[k] = static_cast<double>(c[k]);
        return y;
    }
    const double sigma = std::sqrt(sigma2);
    for (std::size_t k = 0; k < c.size(); ++k)
        y[k] = static_cast<double>(c[k]) + sigma * stream.gaussian();
    return y;
}

} // namespace ngdbf
