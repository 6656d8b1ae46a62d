#include <doctest.h>

#include "test_util.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli_app.hpp"

namespace fs = std::filesystem;
using cslprobe::cli::run;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    Result r;
    r.code = run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("cslprobe_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const auto p = dir / "config.json";
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("budget with reference values writes CSV and JSON") {
    const auto dir = fresh_dir("budget");
    const auto r = invoke({"--paper-values", "--out", dir.string(), "budget"});
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    CHECK(r.out.find("dark_counts rate=3.675e-10") != std::string::npos);
    const auto csv = slurp(dir / "budget.csv");
    CHECK(csv.rfind("# cslprobe ", 0) == 0);
    CHECK(csv.find("# command: budget") != std::string::npos);
    CHECK(csv.find("channel,rate_per_s,lambda_min_per_s") != std::string::npos);
    CHECK(csv.find("\ntotal,") != std::string::npos);

    const auto j = nlohmann::json::parse(slurp(dir / "budget.json"));
    CHECK(j.contains("config"));
    CHECK(j["result"]["rows"].size() == 5);
}

TEST_CASE("repeated runs are byte-identical") {
    const auto a = fresh_dir("det_a");
    const auto b = fresh_dir("det_b");
    REQUIRE(invoke({"--paper-values", "--out", a.string(), "budget"}).code == 0);
    REQUIRE(invoke({"--paper-values", "--out", b.string(), "budget"}).code == 0);
    CHECK(slurp(a / "budget.csv") == slurp(b / "budget.csv"));
    CHECK(slurp(a / "budget.json") == slurp(b / "budget.json"));
    REQUIRE(invoke({"--out", a.string(), "heatmap"}).code == 0);
    REQUIRE(invoke({"--out", b.string(), "--jobs", "1", "heatmap"}).code == 0);
    CHECK(slurp(a / "heatmap.csv") == slurp(b / "heatmap.csv"));
}

TEST_CASE("errors are structured JSON with distinct exit codes") {
    const auto dir = fresh_dir("errors");
    auto r = invoke({"simulate", "--scenario", "nope"});
    CHECK(r.code == 2);
    CHECK(nlohmann::json::parse(r.err)["error"]["kind"] == "usage");

    const auto cfg = write_config(dir, R"({"system": {"kappa_p_ex": -1}})");
    r = invoke({"--config", cfg.string(), "budget"});
    CHECK(r.code == 2);
    const auto j = nlohmann::json::parse(r.err);
    CHECK(j["error"]["kind"] == "config");
    CHECK(j["error"]["field"] == "system.kappa_p_ex");

    r = invoke({"--config", (dir / "missing.json").string(), "budget"});
    CHECK(r.code == 2);
    r = invoke({});
    CHECK(r.code == 2);
    r = invoke({"--out", dir.string(), "exclude", "--rc-grid", "1:2"});
    CHECK(r.code == 2);
    CHECK(nlohmann::json::parse(r.err)["error"]["kind"] == "config");
}

TEST_CASE("simulate prints the efficiency and writes the trace") {
    const auto dir = fresh_dir("simulate");
    const auto cfg = write_config(dir, R"({"numerics": {"check_cutoff": false}})");
    const auto r = invoke({"--config", cfg.string(), "--out", dir.string(), "simulate", "--scenario", "eta-om"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("eta_om=0.30", 0) == 0);
    CHECK(fs::exists(dir / "eta_om.csv"));
    CHECK(fs::exists(dir / "eta_om.json"));
}

TEST_CASE("output directory falls back to the environment") {
    const auto dir = fresh_dir("env");
    ::setenv("CSLPROBE_OUT", dir.string().c_str(), 1);
    const auto r = invoke({"quadratic"});
    ::unsetenv("CSLPROBE_OUT");
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "quadratic.json"));
    CHECK(r.out.find("threshold_printed_hz=27.5") != std::string::npos);
}

TEST_CASE("sweep, exclude and dp write their tables") {
    const auto dir = fresh_dir("grids");
    const auto cfg = write_config(dir, R"({"numerics": {"check_cutoff": false}})");
    auto r = invoke({"--config", cfg.string(), "--out", dir.string(), "sweep", "--param",
                     "kappa_s_ex_over_kappa_p", "--grid", "1:2:2"});
    REQUIRE(r.code == 0);
    const auto csv = slurp(dir / "sweep_kappa_s_ex_over_kappa_p.csv");
    CHECK(csv.find("\nkappa_s_ex_over_kappa_p,eta_om,eta_stokes,eta_om2\n") != std::string::npos);

    r = invoke({"--paper-values", "--out", dir.string(), "exclude", "--rc-grid", "1e-8:1e-6:3:log"});
    REQUIRE(r.code == 0);
    CHECK(slurp(dir / "exclusion.csv").find("r_c_m,D,lambda_min_per_s") != std::string::npos);

    r = invoke({"--paper-values", "--out", dir.string(), "dp"});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "dp.json"));
}

TEST_CASE("the installed executable runs") {
    const auto dir = fresh_dir("exe");
    const std::string cmd = std::string("\"") + CSLPROBE_CLI_PATH + "\" --version > \"" +
                            (dir / "v.txt").string() + "\"";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(!slurp(dir / "v.txt").empty());
    const std::string bad = std::string("\"") + CSLPROBE_CLI_PATH + "\" frobnicate 2> \"" +
                            (dir / "e.txt").string() + "\"";
    const int status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(status) == 2);
    CHECK(slurp(dir / "e.txt").find("\"error\"") != std::string::npos);
}

}  // TEST_SUITE
