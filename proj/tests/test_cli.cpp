#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prqs/analytic.hpp"

#ifndef PRQS_CLI_PATH
#error "PRQS_CLI_PATH must point at the CLI binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWorkDir = "cli_test_tmp";

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const fs::path out_file = kWorkDir / "stdout.txt";
    const std::string cmd = env_prefix + std::string(PRQS_CLI_PATH) + " " + args + " > " +
                            out_file.string() + " 2> " + (kWorkDir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    res.output = ss.str();
    return res;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> rows;
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(line);
    }
    return rows;
}

struct WorkDirGuard {
    WorkDirGuard() {
        fs::remove_all(kWorkDir);
        fs::create_directories(kWorkDir);
    }
} work_dir_guard;

}  // namespace

TEST_CASE("help and version exit cleanly") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("--version").output.find("1.") != std::string::npos);
    CHECK(run_cli("nonsense-subcommand").exit_code == 2);
}

TEST_CASE("point emits the documented JSON schema") {
    const auto res =
        run_cli("point --alpha2 1 --eta 0.5 --n-rounds 100 --methods exact,infinite_n");
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.output);
    CHECK(j.contains("tool_version"));
    CHECK(j["config"]["alpha2"] == 1.0);
    const auto& exact = j["results"]["exact"];
    CHECK(exact.contains("mse_alice"));
    CHECK(exact.contains("mse_eve"));
    CHECK(exact.contains("privacy"));
    // infinite-round privacy is the closed form
    const double expected = std::exp(-4.0 * 1.0 * 0.5);
    CHECK(j["results"]["infinite_n"]["privacy"].get<double>() ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(j["results"]["infinite_n"]["mse_alice"].is_null());
}

TEST_CASE("point rejects unknown methods with a usage error") {
    const auto res = run_cli("point --alpha2 1 --methods exactt");
    CHECK(res.exit_code == 2);
}

TEST_CASE("point rejects invalid parameters") {
    CHECK(run_cli("point --alpha2 1 --eta 1.5").exit_code == 2);
    CHECK(run_cli("point --alpha2 -2").exit_code == 2);
}

TEST_CASE("sweep writes the documented CSV with one row per point and method") {
    const fs::path out = kWorkDir / "sweep.csv";
    const auto res = run_cli("sweep --axis alpha2 --grid 0.01:100:50:log --eta 0.9 --n-rounds 100 "
                             "--methods exact,asymptotic --out " +
                             out.string());
    REQUIRE(res.exit_code == 0);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("# prqs sweep v1\n", 0) == 0);
    const auto rows = data_lines(csv);
    REQUIRE(rows.size() == 101);  // header + 50 points x 2 methods
    CHECK(rows[0] ==
          "alpha2,eta,n_rounds,method,mse_alice,mse_eve,privacy,mse_alice_se,mse_eve_se");

    // exact rows: SE cells empty; privacy tends to 0 at vanishing energy and
    // passes through an interior maximum
    std::vector<double> privacy;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::stringstream ss(rows[i]);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() >= 7);
        cells.resize(9);  // getline drops trailing empty SE cells
        if (cells[3] == "exact") {
            CHECK(cells[7].empty());
            CHECK(cells[8].empty());
            privacy.push_back(std::stod(cells[6]));
        }
    }
    REQUIRE(privacy.size() == 50);
    const auto max_it = std::max_element(privacy.begin(), privacy.end());
    CHECK(max_it != privacy.begin());
    CHECK(max_it != privacy.end() - 1);
}

TEST_CASE("sweep privacy vanishes with the probe energy") {
    // the zero-energy limit needs N alpha^2 << 1, so probe well below 1/N
    const fs::path out = kWorkDir / "sweep_low.csv";
    REQUIRE(run_cli("sweep --axis alpha2 --grid 1e-6:1e-4:5:log --eta 0.9 --n-rounds 100 "
                    "--methods exact --out " +
                    out.string())
                .exit_code == 0);
    const auto rows = data_lines(slurp(out));
    REQUIRE(rows.size() == 6);
    std::vector<double> privacy;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::stringstream ss(rows[i]);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        privacy.push_back(std::stod(cells[6]));
    }
    CHECK(privacy.front() < 0.02);
    CHECK(std::is_sorted(privacy.begin(), privacy.end()));
}

TEST_CASE("sweep validates its grid") {
    CHECK(run_cli("sweep --axis alpha2 --grid 3,2,1 --out " + (kWorkDir / "bad.csv").string())
              .exit_code == 2);
    CHECK(run_cli("sweep --axis nonsense --grid 1,2 --out " + (kWorkDir / "bad.csv").string())
              .exit_code == 2);
}

TEST_CASE("simulate is byte-identical across reruns and thread counts") {
    const std::string args =
        "simulate --alpha2 1 --eta 0.8 --n-rounds 50 --phi 0.3 --trials 300 --seed 99 --out ";
    REQUIRE(run_cli(args + (kWorkDir / "runA").string()).exit_code == 0);
    REQUIRE(run_cli(args + (kWorkDir / "runB").string()).exit_code == 0);
    REQUIRE(run_cli(args + (kWorkDir / "runC").string(), "OMP_NUM_THREADS=3 ").exit_code == 0);

    const std::string csv_a = slurp(kWorkDir / "runA_trials.csv");
    CHECK(csv_a == slurp(kWorkDir / "runB_trials.csv"));
    CHECK(csv_a == slurp(kWorkDir / "runC_trials.csv"));
    CHECK(slurp(kWorkDir / "runA_summary.json") == slurp(kWorkDir / "runB_summary.json"));
    CHECK(slurp(kWorkDir / "runA_summary.json") == slurp(kWorkDir / "runC_summary.json"));

    CHECK(data_lines(csv_a).size() == 301);  // header + one row per trial
    const json summary = json::parse(slurp(kWorkDir / "runA_summary.json"));
    CHECK(summary["config"]["seed"] == 99);
    CHECK(summary["summary"].contains("mse_alice_standard_error"));
    CHECK(summary["summary"].contains("pass_rate"));

    // the summary tracks the quadrature value at the same point
    const double exact = prqs::mse_alice_exact(std::sqrt(0.8), 50);
    const double mse = summary["summary"]["mse_alice"].get<double>();
    const double se = summary["summary"]["mse_alice_standard_error"].get<double>();
    CHECK(std::abs(mse - exact) < 3.5 * se);
}

TEST_CASE("check passes clean data with exit 0") {
    const fs::path data = kWorkDir / "clean.csv";
    {
        std::ofstream out(data);
        out << "re,im\n";
        for (int i = 0; i < 1000; ++i) out << "1.0,0.0\n";
    }
    const auto res = run_cli("check --data " + data.string() + " --alpha2 1 --epsilon 0.5");
    CHECK(res.exit_code == 0);
    const json j = json::parse(res.output);
    CHECK(j["decision"]["eta_hat"].get<double>() == doctest::Approx(1.0));
    CHECK(j["decision"]["passed"].get<bool>());
    CHECK(j["n_samples"] == 1000);
}

TEST_CASE("check aborts lossy data with exit 3") {
    const fs::path data = kWorkDir / "lossy.csv";
    {
        std::ofstream out(data);
        // eta = 0.2 at alpha = 2: received amplitude sqrt(0.2)*2 ~ 0.894
        for (int i = 0; i < 2000; ++i) out << "0.894427191,0.0\n";
    }
    const auto res =
        run_cli("check --data " + data.string() + " --alpha2 4 --epsilon 0.05 --delta 0.05");
    CHECK(res.exit_code == 3);
    const json j = json::parse(res.output);
    CHECK_FALSE(j["decision"]["passed"].get<bool>());
    CHECK(j["decision"]["privacy_bound"].get<double>() < 0.01);
}

TEST_CASE("check rejects malformed and empty data with exit 2") {
    const fs::path broken = kWorkDir / "broken.csv";
    {
        std::ofstream out(broken);
        out << "0.5,0.1\n";
        out << "not-a-number,0.2\n";
    }
    const auto res = run_cli("check --data " + broken.string() + " --alpha2 1");
    CHECK(res.exit_code == 2);

    const fs::path empty = kWorkDir / "empty.csv";
    { std::ofstream out(empty); }
    CHECK(run_cli("check --data " + empty.string() + " --alpha2 1").exit_code == 2);
    CHECK(run_cli("check --data " + (kWorkDir / "missing.csv").string() + " --alpha2 1")
              .exit_code == 2);
}

TEST_CASE("check reports the offending line number") {
    const fs::path broken = kWorkDir / "broken2.csv";
    {
        std::ofstream out(broken);
        out << "0.5,0.1\n0.5,0.1\nbad-line\n";
    }
    run_cli("check --data " + broken.string() + " --alpha2 1");
    const std::string err = slurp(kWorkDir / "stderr.txt");
    CHECK(err.find("line 3") != std::string::npos);
}

TEST_CASE("check finite_n mode and moment estimator run") {
    const fs::path data = kWorkDir / "finite.csv";
    {
        std::ofstream out(data);
        for (int i = 0; i < 500; ++i) out << "0.95,0.0\n";
    }
    // eta_lower ~ 0.81 here; the finite-round privacy at N=500 sits near
    // 0.46, so a 0.6 threshold passes and 0.3 aborts
    const auto fin =
        run_cli("check --data " + data.string() + " --alpha2 1 --epsilon 0.6 --mode finite_n");
    CHECK(fin.exit_code == 0);
    const auto fin_tight =
        run_cli("check --data " + data.string() + " --alpha2 1 --epsilon 0.3 --mode finite_n");
    CHECK(fin_tight.exit_code == 3);
    const auto mom = run_cli("check --data " + data.string() +
                             " --alpha2 1 --epsilon 0.9 --eta-estimator moment");
    const json j = json::parse(mom.output);
    CHECK(j["estimator"] == "moment");
}

TEST_CASE("config file values are used and flags override them") {
    const fs::path cfg = kWorkDir / "cfg.json";
    {
        std::ofstream out(cfg);
        out << R"({"alpha2": 4.0, "eta": 0.25, "n_rounds": 64})";
    }
    const auto from_file = run_cli("point --config " + cfg.string() + " --methods infinite_n");
    REQUIRE(from_file.exit_code == 0);
    json j = json::parse(from_file.output);
    CHECK(j["config"]["alpha2"] == 4.0);
    CHECK(j["config"]["eta"] == 0.25);
    CHECK(j["config"]["n_rounds"] == 64);

    const auto overridden =
        run_cli("point --config " + cfg.string() + " --eta 0.75 --methods infinite_n");
    j = json::parse(overridden.output);
    CHECK(j["config"]["eta"] == 0.75);
    CHECK(j["config"]["alpha2"] == 4.0);
}

TEST_CASE("fig2 preset writes both sweep files") {
    const fs::path dir = kWorkDir / "fig2";
    const auto res = run_cli("fig2 --points 12 --n-rounds 100 --out " + dir.string());
    REQUIRE(res.exit_code == 0);
    for (const char* name : {"fig2_vs_alpha2.csv", "fig2_vs_eta.csv"}) {
        const std::string csv = slurp(dir / name);
        CHECK(csv.rfind("# prqs sweep v1\n", 0) == 0);
        CHECK(data_lines(csv).size() == 1 + 12 * 2);
    }
}
