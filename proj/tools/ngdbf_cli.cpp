// Command-line front end: single-frame decoding, BER/WER sweeps, localized
// trapping-set experiments, replay of archived failures, and code validation.
// Every artifact-producing run writes a provenance JSON sufficient to
// reproduce its output bit for bit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ngdbf/archive.hpp"
#include "ngdbf/config.hpp"
#include "ngdbf/montecarlo.hpp"
#include "ngdbf/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ngdbf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDecodeFailure = 1;
constexpr int kExitUsage = 2;

ParityCheckMatrix load_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open code file " + path);
    return load_alist(in);
}

/// Resolve a code path from the config relative to the config file when it
/// does not exist relative to the working directory.
std::string resolve_code_path(const std::string& code_path, const std::string& config_path) {
    if (code_path.empty() || fs::exists(code_path)) return code_path;
    const fs::path candidate = fs::path(config_path).parent_path() / code_path;
    if (fs::exists(candidate)) return candidate.string();
    return code_path;
}

ConfigMap load_config(const std::string& path, const std::vector<std::string>& overrides) {
    ConfigMap m = ConfigMap::parse_file(path);
    for (const auto& kv : overrides) m.apply_override(kv);
    return m;
}

int default_workers() {
    if (const char* env = std::getenv("NGDBF_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

json provenance_base(const std::string& command, const std::string& config_path,
                     const std::vector<std::string>& overrides, std::uint64_t seed) {
    json j;
    j["tool"] = "ngdbf";
    j["version"] = kVersion;
    j["command"] = command;
    j["config_file"] = config_path;
    j["overrides"] = overrides;
    j["master_seed"] = seed;
    return j;
}

void write_provenance(const std::string& out_path, const json& j) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write provenance file " + out_path);
    out << j.dump(2) << "\n";
}

std::string provenance_path_for(const std::string& out_path, const std::string& command) {
    return out_path.empty() ? command + ".prov.json" : out_path + ".prov.json";
}

std::vector<double> read_real_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sample file " + path);
    std::vector<double> y;
    double v;
    while (in >> v) y.push_back(v);
    if (!in.eof()) throw ConfigError("sample file " + path + " contains a non-numeric token");
    return y;
}

// ---- decode ----

struct DecodeOptions {
    std::string code_path, config_path, y_path, out_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 1;
    double ebn0_db = 0.0;
    double rate = 0.0; // 0 = design rate (n-m)/n
};

int cmd_decode(const DecodeOptions& opt) {
    ConfigMap m = load_config(opt.config_path, opt.overrides);
    const DecoderConfig cfg = decoder_config_from(m);
    m.reject_unknown();

    const ParityCheckMatrix h = load_code(opt.code_path);
    const double rate =
        opt.rate > 0.0 ? opt.rate
                       : static_cast<double>(h.symbol_count() - h.check_count()) / h.symbol_count();
    const double sigma2 = ebn0_to_sigma2(opt.ebn0_db, rate);
    const double n0 = 2.0 * sigma2;

    std::vector<double> y;
    if (!opt.y_path.empty()) {
        y = read_real_vector(opt.y_path);
        if (y.size() != static_cast<std::size_t>(h.symbol_count()))
            throw ConfigError("sample file length " + std::to_string(y.size()) +
                              " does not match code length " + std::to_string(h.symbol_count()));
    } else {
        NoiseStream chan(NoiseStreamKey{opt.seed, 0, 0, StreamRole::channel});
        y = transmit(BipolarVector::all_plus(h.symbol_count()).values(), sigma2, chan);
    }

    const auto result = decode(h, y, n0, cfg, [&](int phase) {
        return NoiseStream(
            NoiseStreamKey{opt.seed, 0, static_cast<std::uint32_t>(phase), StreamRole::perturbation});
    });

    std::cout << "success=" << (result.success ? 1 : 0) << " phases_used=" << result.phases_used
              << " total_iterations=" << result.total_iterations << "\n";

    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        if (!out) throw std::runtime_error("cannot write decision file " + opt.out_path);
        for (std::int8_t v : result.output.values()) out << static_cast<int>(v) << "\n";
    }

    json prov = provenance_base("decode", opt.config_path, opt.overrides, opt.seed);
    prov["code"] = opt.code_path;
    prov["ebn0_db"] = opt.ebn0_db;
    prov["rate"] = rate;
    if (!opt.y_path.empty()) prov["y_file"] = opt.y_path;
    prov["result"] = {{"success", result.success},
                      {"phases_used", result.phases_used},
                      {"total_iterations", result.total_iterations}};
    write_provenance(provenance_path_for(opt.out_path, "decode"), prov);
    return result.success ? kExitOk : kExitDecodeFailure;
}

// ---- sweep ----

struct SweepOptions {
    std::string code_path, config_path, out_path, checkpoint_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 0;
};

int cmd_sweep(const SweepOptions& opt) {
    ConfigMap m = load_config(opt.config_path, opt.overrides);
    CampaignConfig cfg = campaign_config_from(m);
    m.reject_unknown();

    if (!opt.code_path.empty()) cfg.code_path = opt.code_path;
    if (cfg.code_path.empty())
        throw ConfigError("no code given: set key \"code\" in the config or pass --code");
    cfg.code_path = resolve_code_path(cfg.code_path, opt.config_path);
    if (cfg.ebn0_points.empty()) throw ConfigError("sweep requires key \"ebn0_db\"");
    if (opt.seed_given) cfg.master_seed = opt.seed;
    cfg.workers = opt.workers >= 1 ? opt.workers : default_workers();

    const ParityCheckMatrix h = load_code(cfg.code_path);
    if (cfg.rate == 0.0)
        cfg.rate = static_cast<double>(h.symbol_count() - h.check_count()) / h.symbol_count();
    cfg.validate();

    const auto table = sweep(h, cfg, opt.checkpoint_path, [&](std::size_t k, const PointStats& s) {
        std::cout << "point " << k + 1 << "/" << cfg.ebn0_points.size() << ": Eb/N0 "
                  << format_double(s.ebn0_db) << " dB, frames " << s.frames << ", BER "
                  << format_double(s.ber()) << ", WER " << format_double(s.wer())
                  << ", avg_iterations " << format_double(s.avg_iterations())
                  << (s.unsaturated ? " (unsaturated)" : "") << "\n";
    });

    std::ofstream out(opt.out_path);
    if (!out) throw std::runtime_error("cannot write results file " + opt.out_path);
    write_results_csv(out, table, cfg.phases());

    json prov = provenance_base("sweep", opt.config_path, opt.overrides, cfg.master_seed);
    prov["campaign"] = detail::campaign_config_json(cfg);
    prov["workers"] = cfg.workers;
    prov["results_csv"] = opt.out_path;
    json points = json::array();
    for (const auto& s : table) points.push_back(detail::point_stats_json(s));
    prov["points"] = points;
    write_provenance(provenance_path_for(opt.out_path, "sweep"), prov);
    return kExitOk;
}

// ---- trapset ----

struct TrapsetOptions {
    std::string config_path, out_path, record_dir, archive_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 0;
    int record_limit = 10;
    int archive_limit = 100;
};

int cmd_trapset(const TrapsetOptions& opt) {
    ConfigMap m = load_config(opt.config_path, opt.overrides);
    TrapsetCliConfig cfg = trapset_config_from(m);
    m.reject_unknown();
    if (opt.seed_given) cfg.master_seed = opt.seed;
    const int workers = opt.workers >= 1 ? opt.workers : default_workers();

    if (!opt.archive_path.empty() && cfg.sigmas.size() != 1)
        throw ConfigError("--archive needs a single-sigma config so the stored cases are homogeneous");

    std::ostringstream csv;
    csv << "sigma,trials,gdbf_failures,gdbf_rate,gdbf_ci_lo,gdbf_ci_hi,"
           "ngdbf_failures,ngdbf_rate,ngdbf_ci_lo,ngdbf_ci_hi\n";
    for (const double sigma : cfg.sigmas) {
        TrapsetExperimentConfig ngdbf_cfg = cfg.base;
        ngdbf_cfg.sigma = sigma;
        TrapsetExperimentConfig gdbf_cfg = ngdbf_cfg;
        gdbf_cfg.eta = 0.0;
        // same master seed: both algorithms see identical channel draws
        const auto gd = failure_rate(gdbf_cfg, cfg.master_seed, workers);
        const auto ng = failure_rate(ngdbf_cfg, cfg.master_seed, workers);
        std::cout << "sigma " << format_double(sigma) << ": GDBF " << gd.failures << "/" << gd.trials
                  << " (rate " << format_double(gd.rate) << "), NGDBF " << ng.failures << "/"
                  << ng.trials << " (rate " << format_double(ng.rate) << ")\n";
        csv << format_double(sigma) << ',' << gd.trials << ',' << gd.failures << ','
            << format_double(gd.rate) << ',' << format_double(gd.ci_lo) << ','
            << format_double(gd.ci_hi) << ',' << ng.failures << ',' << format_double(ng.rate) << ','
            << format_double(ng.ci_lo) << ',' << format_double(ng.ci_hi) << "\n";

        if (!opt.record_dir.empty()) {
            fs::create_directories(opt.record_dir);
            // trajectories of the first failing NGDBF trials, with the GDBF
            // twin and one fresh-noise replay of the same initial condition
            auto rec_cfg = ngdbf_cfg;
            rec_cfg.record_trajectories = true;
            auto rec_gdbf = gdbf_cfg;
            rec_gdbf.record_trajectories = true;
            int recorded = 0;
            for (std::uint64_t i = 0; i < ngdbf_cfg.trials && recorded < opt.record_limit; ++i) {
                const auto probe = run_trial(ngdbf_cfg, cfg.master_seed, i);
                if (probe.success) continue;
                NoiseStream pert(NoiseStreamKey{cfg.master_seed, i, 1, StreamRole::perturbation});
                const auto full = replay(probe.y, rec_cfg, pert);
                NoiseStream none(NoiseStreamKey{cfg.master_seed, i, 1, StreamRole::perturbation});
                const auto twin = replay(probe.y, rec_gdbf, none);
                NoiseStream fresh(NoiseStreamKey{cfg.master_seed, i, 2, StreamRole::perturbation});
                const auto redo = replay(probe.y, rec_cfg, fresh);
                const std::string stem = opt.record_dir + "/traj_sigma" + format_double(sigma) +
                                         "_trial" + std::to_string(i);
                for (const auto& [suffix, trial, label] :
                     {std::tuple{"_ngdbf.csv", &full, "ngdbf"},
                      std::tuple{"_gdbf.csv", &twin, "gdbf"},
                      std::tuple{"_replay.csv", &redo, "ngdbf-replay"}}) {
                    std::ofstream tout(stem + suffix);
                    write_trajectory_csv(tout, label, rec_cfg, *trial);
                }
                ++recorded;
            }
            if (recorded)
                std::cout << "recorded " << recorded << " failing trajectories under "
                          << opt.record_dir << "\n";
        }

        if (!opt.archive_path.empty()) {
            const auto cases = collect_failures(ngdbf_cfg, cfg.master_seed,
                                                static_cast<std::size_t>(opt.archive_limit),
                                                ngdbf_cfg.trials);
            archive_save(opt.archive_path, cases);
            std::cout << "archived " << cases.size() << " failing initial conditions to "
                      << opt.archive_path << "\n";
        }
    }

    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        if (!out) throw std::runtime_error("cannot write results file " + opt.out_path);
        out << csv.str();
    } else {
        std::cout << csv.str();
    }

    json prov = provenance_base("trapset", opt.config_path, opt.overrides, cfg.master_seed);
    prov["sigmas"] = cfg.sigmas;
    prov["trials"] = cfg.base.trials;
    prov["decoder"] = {{"T", cfg.base.T},       {"theta", cfg.base.theta}, {"lambda", cfg.base.lambda},
                       {"w", cfg.base.w},       {"eta", cfg.base.eta}};
    write_provenance(provenance_path_for(opt.out_path, "trapset"), prov);
    return kExitOk;
}

// ---- replay ----

struct ReplayOptions {
    std::string archive_path, config_path, out_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 1;
    int replays = 20;
};

int cmd_replay(const ReplayOptions& opt) {
    ConfigMap m = load_config(opt.config_path, opt.overrides);
    TrapsetCliConfig cfg = trapset_config_from(m);
    m.reject_unknown();
    if (cfg.sigmas.size() != 1) throw ConfigError("replay needs a single-sigma config");

    const auto cases = archive_load(opt.archive_path);
    if (cases.empty()) throw ConfigError("archive " + opt.archive_path + " holds no cases");

    std::ostringstream csv;
    csv << "case,orig_trial,replays,successes,success_fraction\n";
    std::size_t cases_with_success = 0;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        int successes = 0;
        for (int r = 0; r < opt.replays; ++r) {
            NoiseStream pert(NoiseStreamKey{opt.seed, cases[c].trial_index,
                                            static_cast<std::uint32_t>(r + 1),
                                            StreamRole::perturbation});
            successes += replay(cases[c].y, cfg.base, pert).success;
        }
        cases_with_success += successes > 0;
        csv << c << ',' << cases[c].trial_index << ',' << opt.replays << ',' << successes << ','
            << format_double(static_cast<double>(successes) / opt.replays) << "\n";
    }
    const double fraction = static_cast<double>(cases_with_success) / cases.size();
    std::cout << "replayed " << cases.size() << " cases x " << opt.replays << ": " << cases_with_success
              << " cases recovered at least once (fraction " << format_double(fraction) << ")\n";

    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        if (!out) throw std::runtime_error("cannot write results file " + opt.out_path);
        out << csv.str();
    } else {
        std::cout << csv.str();
    }

    json prov = provenance_base("replay", opt.config_path, opt.overrides, opt.seed);
    prov["archive"] = opt.archive_path;
    prov["replays"] = opt.replays;
    prov["cases"] = cases.size();
    prov["cases_with_success"] = cases_with_success;
    write_provenance(provenance_path_for(opt.out_path, "replay"), prov);
    return kExitOk;
}

// ---- validate-code ----

int cmd_validate_code(const std::string& path) {
    const ParityCheckMatrix h = load_code(path);

    std::map<int, int> sym_hist, chk_hist;
    for (int j = 0; j < h.symbol_count(); ++j) ++sym_hist[h.symbol_degree(j)];
    for (int i = 0; i < h.check_count(); ++i) ++chk_hist[h.check_degree(i)];
    const bool regular = sym_hist.size() == 1 && chk_hist.size() == 1;
    const bool consistent = h.transpose_consistent();

    if (regular)
        std::cout << "regular (" << sym_hist.begin()->first << "," << chk_hist.begin()->first
                  << "), n=" << h.symbol_count() << ", m=" << h.check_count() << ", "
                  << (consistent ? "OK" : "INCONSISTENT") << "\n";
    else
        std::cout << "irregular, n=" << h.symbol_count() << ", m=" << h.check_count() << ", "
                  << (consistent ? "OK" : "INCONSISTENT") << "\n";
    std::cout << "edges=" << h.edge_count() << "\n";
    std::cout << "symbol degree histogram:";
    for (const auto& [deg, count] : sym_hist) std::cout << " " << deg << ":" << count;
    std::cout << "\ncheck degree histogram:";
    for (const auto& [deg, count] : chk_hist) std::cout << " " << deg << ":" << count;
    std::cout << "\n";
    return consistent ? kExitOk : kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"NGDBF LDPC decoding simulation toolkit"};
    app.require_subcommand(1);

    DecodeOptions dec;
    auto* decode_cmd = app.add_subcommand("decode", "decode one frame and report the outcome");
    decode_cmd->add_option("--code", dec.code_path, "alist parity-check file")->required();
    decode_cmd->add_option("--config", dec.config_path, "decoder config file")->required();
    decode_cmd->add_option("--ebn0", dec.ebn0_db, "Eb/N0 in dB (sets the decoder's N0)")->required();
    decode_cmd->add_option("--rate", dec.rate, "code rate; default (n-m)/n");
    decode_cmd->add_option("--seed", dec.seed, "master seed for frame and perturbations");
    decode_cmd->add_option("--y", dec.y_path, "read samples from file instead of generating");
    decode_cmd->add_option("--out", dec.out_path, "write the decision vector here");
    decode_cmd->add_option("--set", dec.overrides, "config override key=value");

    SweepOptions sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a BER/WER campaign over Eb/N0 points");
    sweep_cmd->add_option("--code", sw.code_path, "alist parity-check file (overrides config)");
    sweep_cmd->add_option("--config", sw.config_path, "campaign config file")->required();
    sweep_cmd->add_option("--out", sw.out_path, "results CSV path")->required();
    sweep_cmd->add_option("--checkpoint", sw.checkpoint_path, "checkpoint file for resumable sweeps");
    sweep_cmd->add_option("--seed", sw.seed, "master seed (overrides config)")
        ->each([&sw](const std::string&) { sw.seed_given = true; });
    sweep_cmd->add_option("--workers", sw.workers, "worker threads (default $NGDBF_WORKERS or 1)");
    sweep_cmd->add_option("--set", sw.overrides, "config override key=value");

    TrapsetOptions ts;
    auto* trapset_cmd = app.add_subcommand("trapset", "localized (8,8) absorbing-set experiments");
    trapset_cmd->add_option("--config", ts.config_path, "trapset config file")->required();
    trapset_cmd->add_option("--out", ts.out_path, "failure-rate table CSV path");
    trapset_cmd->add_option("--record", ts.record_dir, "record failing-trial trajectory CSVs here");
    trapset_cmd->add_option("--record-limit", ts.record_limit, "max trajectories per sigma");
    trapset_cmd->add_option("--archive", ts.archive_path, "archive failing initial conditions (JSON)");
    trapset_cmd->add_option("--archive-limit", ts.archive_limit, "max archived cases");
    trapset_cmd->add_option("--seed", ts.seed, "master seed (overrides config)")
        ->each([&ts](const std::string&) { ts.seed_given = true; });
    trapset_cmd->add_option("--workers", ts.workers, "worker threads (default $NGDBF_WORKERS or 1)");
    trapset_cmd->add_option("--set", ts.overrides, "config override key=value");

    ReplayOptions rp;
    auto* replay_cmd = app.add_subcommand("replay", "re-decode archived initial conditions");
    replay_cmd->add_option("--archive", rp.archive_path, "failed-y archive JSON")->required();
    replay_cmd->add_option("--config", rp.config_path, "trapset config file")->required();
    replay_cmd->add_option("--replays", rp.replays, "fresh-stream replays per case");
    replay_cmd->add_option("--seed", rp.seed, "master seed for replay streams");
    replay_cmd->add_option("--out", rp.out_path, "per-case results CSV path");
    replay_cmd->add_option("--set", rp.overrides, "config override key=value");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate-code", "structural report for an alist file");
    validate_cmd->add_option("code", validate_path, "alist parity-check file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*decode_cmd) return cmd_decode(dec);
        if (*sweep_cmd) return cmd_sweep(sw);
        if (*trapset_cmd) return cmd_trapset(ts);
        if (*replay_cmd) return cmd_replay(rp);
        if (*validate_cmd) return cmd_validate_code(validate_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
