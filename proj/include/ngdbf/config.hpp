#pragma once

#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ngdbf/decoder.hpp"
#include "ngdbf/montecarlo.hpp"
#include "ngdbf/refdec.hpp"
#include "ngdbf/trapset.hpp"

namespace ngdbf {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat key = value configuration text. '#' starts a comment, blank lines are
/// skipped, keys may appear once. Typed take_* accessors consume keys so that
/// reject_unknown() can name anything left over.
class ConfigMap {
public:
    static ConfigMap parse(std::istream& in, const std::string& origin) {
        ConfigMap m;
        m.origin_ = origin;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": expected key = value, got \"" + trimmed + "\"");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            if (value.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty value for key \"" +
                                  key + "\"");
            if (!m.kv_.emplace(key, Entry{value, lineno}).second)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key \"" + key +
                                  "\"");
        }
        return m;
    }

    static ConfigMap parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file " + path);
        return parse(in, path);
    }

    /// Apply a command-line override of the form key=value (replaces any file value).
    void apply_override(const std::string& kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("override must look like key=value, got \"" + kv + "\"");
        const std::string key = trim(kv.substr(0, eq));
        const std::string value = trim(kv.substr(eq + 1));
        if (value.empty()) throw ConfigError("override for \"" + key + "\" has an empty value");
        kv_[key] = Entry{value, 0};
    }

    std::optional<std::string> take_string(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        std::string v = it->second.value;
        kv_.erase(it);
        return v;
    }

    std::optional<double> take_double(const std::string& key) {
        auto raw = take_string(key);
        if (!raw) return std::nullopt;
        return parse_double(key, *raw);
    }

    std::optional<long long> take_int(const std::string& key) {
        auto raw = take_string(key);
        if (!raw) return std::nullopt;
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(*raw, &pos);
            if (pos != raw->size()) throw std::invalid_argument(*raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(bad_value(key, *raw, "integer"));
        }
    }

    std::optional<std::uint64_t> take_uint64(const std::string& key) {
        auto v = take_int(key);
        if (!v) return std::nullopt;
        if (*v < 0) throw ConfigError(bad_value(key, std::to_string(*v), "non-negative integer"));
        return static_cast<std::uint64_t>(*v);
    }

    /// Comma- or space-separated list of reals.
    std::optional<std::vector<double>> take_double_list(const std::string& key) {
        auto raw = take_string(key);
        if (!raw) return std::nullopt;
        std::string s = *raw;
        for (char& c : s)
            if (c == ',') c = ' ';
        std::istringstream in(s);
        std::vector<double> out;
        std::string tok;
        while (in >> tok) out.push_back(parse_double(key, tok));
        if (out.empty()) throw ConfigError(bad_value(key, *raw, "list of reals"));
        return out;
    }

    /// Fails loudly on any key no consumer asked for.
    void reject_unknown() const {
        if (kv_.empty()) return;
        throw ConfigError(origin_ + ": unknown config key \"" + kv_.begin()->first + "\"");
    }

    bool empty() const { return kv_.empty(); }

private:
    struct Entry {
        std::string value;
        int line;
    };

    double parse_double(const std::string& key, const std::string& raw) const {
        try {
            std::size_t pos = 0;
            const double v = std::stod(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(bad_value(key, raw, "real number"));
        }
    }

    std::string bad_value(const std::string& key, const std::string& raw,
                          const char* expected) const {
        return origin_ + ": key \"" + key + "\": expected " + expected + ", got \"" + raw + "\"";
    }

    static std::string trim(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    std::map<std::string, Entry> kv_;
    std::string origin_;
};

/// Decoder keys: T, theta, lambda, w, eta, y_max, smoothing_window, phi.
/// Absent keys keep their defaults.
inline DecoderConfig decoder_config_from(ConfigMap& m) {
    DecoderConfig cfg;
    if (auto v = m.take_int("T")) cfg.T = static_cast<int>(*v);
    if (auto v = m.take_double("theta")) cfg.theta = *v;
    if (auto v = m.take_double("lambda")) cfg.lambda = *v;
    if (auto v = m.take_double("w")) cfg.w = *v;
    if (auto v = m.take_double("eta")) cfg.eta = *v;
    if (auto v = m.take_double("y_max")) cfg.y_max = *v;
    if (auto v = m.take_int("smoothing_window")) cfg.smoothing_window = static_cast<int>(*v);
    if (auto v = m.take_int("phi")) cfg.phi = static_cast<int>(*v);
    cfg.validate();
    return cfg;
}

/// Reference decoder keys: T, alpha.
inline NmsConfig nms_config_from(ConfigMap& m) {
    NmsConfig cfg;
    if (auto v = m.take_int("T")) cfg.T = static_cast<int>(*v);
    if (auto v = m.take_double("alpha")) cfg.alpha = *v;
    cfg.validate();
    return cfg;
}

/// Campaign keys: algorithm, code, rate, ebn0_db, min_bit_errors,
/// min_word_errors, max_frames, seed, batch_size, plus the keys of the
/// selected algorithm. rate defaults to the design rate (n-m)/n when absent;
/// the caller resolves that against the loaded code.
inline CampaignConfig campaign_config_from(ConfigMap& m) {
    CampaignConfig cfg;
    const std::string algo = m.take_string("algorithm").value_or("ngdbf");
    if (algo == "ngdbf") {
        cfg.algorithm = CampaignConfig::Algorithm::ngdbf;
        cfg.decoder = decoder_config_from(m);
    } else if (algo == "nms") {
        cfg.algorithm = CampaignConfig::Algorithm::nms;
        cfg.nms = nms_config_from(m);
    } else {
        throw ConfigError("key \"algorithm\": expected ngdbf or nms, got \"" + algo + "\"");
    }
    if (auto v = m.take_string("code")) cfg.code_path = *v;
    cfg.rate = m.take_double("rate").value_or(0.0); // 0 = derive from the code
    if (auto v = m.take_double_list("ebn0_db")) cfg.ebn0_points = *v;
    if (auto v = m.take_uint64("min_bit_errors")) cfg.min_bit_errors = *v;
    if (auto v = m.take_uint64("min_word_errors")) cfg.min_word_errors = *v;
    if (auto v = m.take_uint64("max_frames")) cfg.max_frames = *v;
    if (auto v = m.take_uint64("seed")) cfg.master_seed = *v;
    if (auto v = m.take_uint64("batch_size")) cfg.batch_size = *v;
    return cfg;
}

/// Localized trapping-set experiment: sigma may list several noise levels.
struct TrapsetCliConfig {
    std::vector<double> sigmas;
    TrapsetExperimentConfig base;
    std::uint64_t master_seed = 1;
};

inline TrapsetCliConfig trapset_config_from(ConfigMap& m) {
    TrapsetCliConfig cfg;
    if (auto v = m.take_double_list("sigma")) cfg.sigmas = *v;
    if (cfg.sigmas.empty()) throw ConfigError("trapset config requires key \"sigma\"");
    if (auto v = m.take_uint64("trials")) cfg.base.trials = *v;
    if (auto v = m.take_int("T")) cfg.base.T = static_cast<int>(*v);
    if (auto v = m.take_double("theta")) cfg.base.theta = *v;
    if (auto v = m.take_double("lambda")) cfg.base.lambda = *v;
    if (auto v = m.take_double("w")) cfg.base.w = *v;
    if (auto v = m.take_double("eta")) cfg.base.eta = *v;
    if (auto v = m.take_uint64("seed")) cfg.master_seed = *v;
    cfg.base.sigma = cfg.sigmas.front();
    cfg.base.validate();
    return cfg;
}

} // namespace ngdbf
