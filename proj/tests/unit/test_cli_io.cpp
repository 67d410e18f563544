#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hhsv/cli.hpp"
#include "hhsv/config.hpp"

using namespace hhsv;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("hhsv_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "hhsv");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("bundle JSON round trip") {
    ModelBundle b = default_bundle();
    b.model.mu = DriftSchedule({{0.0, 0.05}, {0.5, 0.08}});
    b.law = GammaJumps{2.0, 20.0};
    b.hawkes.alpha = 0.7;
    const auto back = bundle_from_json(bundle_to_json(b));
    CHECK(bundle_to_json(back) == bundle_to_json(b));
    CHECK(back.model.mu.at(0.75) == 0.08);
    CHECK(std::get<GammaJumps>(back.law).shape == 2.0);

    for (const auto& law : {JumpLaw{ExponentialJumps{3.0}}, JumpLaw{ConstantJumps{0.2}}}) {
        b.law = law;
        CHECK(bundle_to_json(bundle_from_json(bundle_to_json(b))) == bundle_to_json(b));
    }
}

TEST_CASE("partial configs keep defaults") {
    const auto b = bundle_from_json(nlohmann::json::parse(R"({"model": {"kappa": 3.0}})"));
    CHECK(b.model.kappa == 3.0);
    CHECK(b.model.sigma == default_bundle().model.sigma);
    const auto c = bundle_from_json(nlohmann::json::parse(R"({"model": {"mu": 0.07}})"));
    CHECK(c.model.mu.at(0.3) == 0.07);
}

TEST_CASE("bad configs are rejected") {
    using nlohmann::json;
    CHECK_THROWS_AS(bundle_from_json(json::parse(R"({"model": {"kapa": 3.0}})")), ConfigError);
    CHECK_THROWS_AS(bundle_from_json(json::parse(R"({"extra": {}})")), ConfigError);
    CHECK_THROWS_AS(bundle_from_json(json::parse(R"({"model": {"kappa": "x"}})")), ConfigError);
    CHECK_THROWS_AS(bundle_from_json(json::parse(R"({"jump_law": {"type": "pareto"}})")), ConfigError);
    CHECK_THROWS_AS(bundle_from_json(json::parse(R"({"jump_law": {"type": "gamma", "rate": 1, "k": 2}})")),
                    ConfigError);
    CHECK_THROWS_AS(bundle_from_json(json::parse(R"([1, 2])")), ConfigError);
    CHECK_THROWS_AS(bundle_from_json(json::parse(R"({"model": {"mu": [{"t_from": 0.5, "value": 1}]}})")),
                    ConfigError);

    const auto dir = scratch("bad_config");
    std::ofstream(dir / "feller.json") << R"({"model": {"sigma": 1.0}})";
    CHECK_THROWS_AS(load_config(dir / "feller.json"), ValidationError);
    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("atomic writes replace the target") {
    const auto dir = scratch("atomic");
    write_atomic(dir / "a.txt", "first");
    write_atomic(dir / "a.txt", "second");
    CHECK(slurp(dir / "a.txt") == "second");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
    CHECK(files == 1);
}

TEST_CASE("odes with c = 0 has zero columns") {
    const auto dir = scratch("odes0");
    REQUIRE(run({"odes", "--c", "0", "--out", dir.string()}) == cli::kExitOk);
    const auto rows = read_csv(dir / "odes.csv");
    REQUIRE(rows.size() > 2);
    CHECK(rows[0] == std::vector<std::string>{"t", "G", "H", "F"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        for (std::size_t k = 1; k < 4; ++k) CHECK(std::stod(rows[i][k]) == 0.0);
    }
    const auto summary = nlohmann::json::parse(slurp(dir / "odes_summary.json"));
    CHECK(summary.contains("c"));
}

TEST_CASE("odes rejects infeasible c") {
    const auto dir = scratch("odes_bad");
    CHECK(run({"odes", "--c", "100", "--out", dir.string()}) == cli::kExitUsage);
}

TEST_CASE("cs-table rows") {
    const auto dir = scratch("cs");
    REQUIRE(run({"cs-table", "--out", dir.string()}) == cli::kExitOk);
    const auto rows = read_csv(dir / "cs_table.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"law", "c_s", "c_l", "riccati_cap"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double cs = std::stod(rows[i][1]);
        const double cl = std::stod(rows[i][2]);
        const double cap = std::stod(rows[i][3]);
        CHECK(cs > 0.0);
        CHECK(cs < cl);
        CHECK(cl <= cap);
    }
}

TEST_CASE("cl-solve output") {
    const auto dir = scratch("cl");
    REQUIRE(run({"cl-solve", "--out", dir.string()}) == cli::kExitOk);
    const auto j = nlohmann::json::parse(slurp(dir / "cl_solve.json"));
    CHECK(j.at("c_l").get<double>() == doctest::Approx(7.7566).epsilon(1e-4));
}

TEST_CASE("usage errors exit 2") {
    const auto dir = scratch("usage");
    CHECK(run({"frobnicate"}) == cli::kExitUsage);
    CHECK(run({}) == cli::kExitUsage);
    CHECK(run({"odes", "--c", "abc"}) == cli::kExitUsage);
    CHECK(run({"bound-check", "--paths", "10", "--out", dir.string()}) == cli::kExitUsage);
    CHECK(run({"verify", "--suite", "nope", "--out", dir.string()}) == cli::kExitUsage);
    CHECK(run({"odes", "--config", (dir / "none.json").string()}) == cli::kExitUsage);

    std::ofstream(dir / "unknown.json") << R"({"model": {"kapa": 1}})";
    CHECK(run({"odes", "--config", (dir / "unknown.json").string(), "--out", dir.string()}) ==
          cli::kExitUsage);
    std::ofstream(dir / "feller.json") << R"({"model": {"sigma": 1.0}})";
    CHECK(run({"cl-solve", "--config", (dir / "feller.json").string(), "--out", dir.string()}) ==
          cli::kExitUsage);
    CHECK(run({"emm-check", "--a", "3.5", "--paths", "200", "--out", dir.string()}) == cli::kExitUsage);
}

TEST_CASE("simulate writes paths and events") {
    const auto dir = scratch("sim");
    REQUIRE(run({"simulate", "--paths", "3", "--grid-steps", "20", "--out", dir.string()}) == cli::kExitOk);
    const auto rows = read_csv(dir / "paths.csv");
    CHECK(rows[0] == std::vector<std::string>{"path_id", "t", "v", "logS", "lambda", "N", "L"});
    CHECK(rows.size() == 1 + 3 * 21);
    for (int i = 0; i < 3; ++i) CHECK(fs::exists(dir / ("events_" + std::to_string(i) + ".csv")));
}

TEST_CASE("check subcommands") {
    const auto dir = scratch("checks");
    CHECK(run({"bound-check", "--c", "1.0", "--paths", "2000", "--out", dir.string()}) == cli::kExitOk);
    CHECK(fs::exists(dir / "bound_check.json"));
    CHECK(run({"martingale-check", "--a", "1.0", "--paths", "2000", "--out", dir.string()}) == cli::kExitOk);
    const auto m = nlohmann::json::parse(slurp(dir / "martingale_check.json"));
    CHECK(m.contains("z"));
    CHECK(run({"emm-check", "--a", "0.5", "--paths", "2000", "--out", dir.string()}) == cli::kExitOk);
    CHECK(fs::exists(dir / "emm_check.json"));
}

TEST_CASE("verify is byte-reproducible") {
    const auto a = scratch("verify_a");
    const auto b = scratch("verify_b");
    REQUIRE(run({"verify", "--suite", "quick", "--out", a.string()}) == cli::kExitOk);
    REQUIRE(run({"verify", "--suite", "quick", "--workers", "3", "--out", b.string()}) == cli::kExitOk);
    CHECK(slurp(a / "verify.json") == slurp(b / "verify.json"));
    const auto j = nlohmann::json::parse(slurp(a / "verify.json"));
    CHECK(j.dump().find("wall_time") == std::string::npos);
}

#ifdef HHSV_CLI_PATH
TEST_CASE("installed binary exit codes") {
    const std::string exe = HHSV_CLI_PATH;
    const auto dir = scratch("binary");
    const std::string quiet = " > " + (dir / "log").string() + " 2>&1";
    auto code = [&](const std::string& args) {
        const int status = std::system((exe + " " + args + quiet).c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    CHECK(code("cl-solve --out " + dir.string()) == 0);
    CHECK(code("bogus") == 2);
    CHECK(code("--help") == 0);
}
#endif
