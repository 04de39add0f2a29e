// End-to-end checks of the ngdbf binary: exit codes, file outputs, provenance.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kBin = NGDBF_CLI_BIN;
const std::string kCodes = NGDBF_CODES_DIR;
const std::string kConfigs = NGDBF_CONFIGS_DIR;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "ngdbf_cli_test_out.txt";
    const std::string cmd = kBin + " " + args + " > " + out.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(raw), ss.str()};
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "ngdbf_cli_case") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("validate-code reports the bundled codes") {
    auto r = run("validate-code " + kCodes + "/peg_504x1008.alist");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("regular (3,6), n=1008, m=504, OK") != std::string::npos);

    r = run("validate-code " + kCodes + "/reg_384x2048.alist");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("regular (6,32), n=2048") != std::string::npos);
}

TEST_CASE("validate-code exits 2 on a corrupted file") {
    TempDir tmp;
    write_file(tmp / "broken.alist", "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 9\n");
    const auto r = run("validate-code " + (tmp / "broken.alist"));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("line") != std::string::npos);
}

TEST_CASE("decode: noiseless frame exits 0 with zero iterations") {
    TempDir tmp;
    const auto r = run("decode --code " + kCodes + "/peg_504x1008.alist --config " + kConfigs +
                       "/decode_smngdbf.cfg --ebn0 40 --seed 3 --out " + (tmp / "dec.txt"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("success=1") != std::string::npos);
    CHECK(r.output.find("total_iterations=0") != std::string::npos);
    std::ifstream dec(tmp / "dec.txt");
    int v, count = 0;
    while (dec >> v) {
        CHECK(v == 1);
        ++count;
    }
    CHECK(count == 1008);
}

TEST_CASE("decode: unknown config key exits 2 and names it") {
    TempDir tmp;
    write_file(tmp / "bad.cfg", "thetaa = -0.5\n");
    const auto r = run("decode --code " + kCodes + "/toy_n3.alist --config " + (tmp / "bad.cfg") +
                       " --ebn0 3");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("thetaa") != std::string::npos);
}

TEST_CASE("decode: overrides round-trip into the provenance record") {
    TempDir tmp;
    write_file(tmp / "dec.cfg", "T = 50\ntheta = -0.6\n");
    const auto r = run("decode --code " + kCodes + "/toy_n3.alist --config " + (tmp / "dec.cfg") +
                       " --ebn0 20 --set eta=0.5 --set phi=2 --out " + (tmp / "out.txt"));
    CHECK(r.exit_code == 0);
    const auto prov = nlohmann::json::parse(slurp((tmp / "out.txt") + ".prov.json"));
    const auto overrides = prov.at("overrides").get<std::vector<std::string>>();
    REQUIRE(overrides.size() == 2);
    CHECK(overrides[0] == "eta=0.5");
    CHECK(overrides[1] == "phi=2");
    CHECK(prov.at("version").is_string());
    CHECK(prov.at("master_seed").is_number());
}

TEST_CASE("sweep: re-running a completed checkpoint reproduces the CSV") {
    TempDir tmp;
    write_file(tmp / "sweep.cfg",
               "algorithm = ngdbf\ncode = " + kCodes +
                   "/toy_n3.alist\nrate = 0.3333333\nebn0_db = 1.0, 2.0\nT = 25\ntheta = -0.6\n"
                   "lambda = 0.98\nw = 1.0\neta = 0.75\nphi = 2\nmax_frames = 2000\nseed = 9\n");
    const std::string base = "sweep --config " + (tmp / "sweep.cfg");
    auto r = run(base + " --out " + (tmp / "a.csv") + " --checkpoint " + (tmp / "ckpt.json"));
    REQUIRE(r.exit_code == 0);
    r = run(base + " --out " + (tmp / "b.csv") + " --checkpoint " + (tmp / "ckpt.json"));
    REQUIRE(r.exit_code == 0);
    r = run(base + " --out " + (tmp / "c.csv"));
    REQUIRE(r.exit_code == 0);
    const auto a = slurp(tmp / "a.csv");
    CHECK(a == slurp(tmp / "b.csv"));
    CHECK(a == slurp(tmp / "c.csv"));
    CHECK(a.find("ebn0_db,frames,") == 0);

    // provenance embeds the campaign config and seed
    const auto prov = nlohmann::json::parse(slurp((tmp / "a.csv") + ".prov.json"));
    CHECK(prov.at("campaign").at("master_seed").get<std::uint64_t>() == 9);
    CHECK(prov.at("campaign").at("T").get<int>() == 25);
}

TEST_CASE("sweep: worker count does not change the CSV bytes") {
    TempDir tmp;
    write_file(tmp / "sweep.cfg",
               "algorithm = ngdbf\ncode = " + kCodes +
                   "/toy_n3.alist\nrate = 0.3333333\nebn0_db = 1.5\nT = 25\ntheta = -0.6\n"
                   "lambda = 0.98\nw = 1.0\neta = 0.75\nphi = 2\nmax_frames = 4000\nseed = 4\n");
    const std::string base = "sweep --config " + (tmp / "sweep.cfg");
    auto r = run(base + " --out " + (tmp / "w1.csv") + " --workers 1");
    REQUIRE(r.exit_code == 0);
    r = run(base + " --out " + (tmp / "w4.csv") + " --workers 4");
    REQUIRE(r.exit_code == 0);
    CHECK(slurp(tmp / "w1.csv") == slurp(tmp / "w4.csv"));
}

TEST_CASE("trapset -> archive -> replay round trip") {
    TempDir tmp;
    write_file(tmp / "ts.cfg",
               "sigma = 1.0\ntrials = 4000\nT = 100\ntheta = -0.525\nlambda = 1.0\nw = 1.0\n"
               "eta = 1.0\nseed = 2\n");
    auto r = run("trapset --config " + (tmp / "ts.cfg") + " --out " + (tmp / "rates.csv") +
                 " --archive " + (tmp / "arch.json") + " --archive-limit 5 --record " +
                 (tmp / "traj") + " --record-limit 2");
    REQUIRE(r.exit_code == 0);
    const auto rates = slurp(tmp / "rates.csv");
    CHECK(rates.find("sigma,trials,gdbf_failures") == 0);

    // recorded trajectories exist, three per failing case
    int traj_files = 0;
    for (const auto& entry : fs::directory_iterator(tmp / "traj")) {
        ++traj_files;
        CHECK(entry.path().extension() == ".csv");
    }
    CHECK(traj_files == 6);

    r = run("replay --archive " + (tmp / "arch.json") + " --config " + (tmp / "ts.cfg") +
            " --replays 8 --out " + (tmp / "replay.csv"));
    REQUIRE(r.exit_code == 0);
    const auto replay_csv = slurp(tmp / "replay.csv");
    CHECK(replay_csv.find("case,orig_trial,replays,successes,success_fraction") == 0);
    CHECK(r.output.find("cases recovered at least once") != std::string::npos);
}

TEST_CASE("decode: hard frame with a deterministic GDBF config exits 1") {
    TempDir tmp;
    write_file(tmp / "gdbf.cfg", "T = 50\ntheta = -0.6\nlambda = 1.0\nw = 1.0\neta = 0.0\n");
    const auto r = run("decode --code " + kCodes + "/peg_504x1008.alist --config " +
                       (tmp / "gdbf.cfg") + " --ebn0 0.0 --seed 11");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("success=0") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("sweep --out x.csv").exit_code == 2);          // missing --config
    CHECK(run("frobnicate").exit_code == 2);                 // unknown subcommand
    CHECK(run("decode --code nope.alist --config nope.cfg --ebn0 3").exit_code == 2);
}
