// Command-line front end: single-point evaluation, parameter sweeps to CSV,
// Monte Carlo experiments, and CHECK-phase adjudication of stored data.
//
// Exit codes: 0 success / CHECK passed, 2 usage or data error, 3 CHECK abort.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prqs/analytic.hpp"
#include "prqs/estimators.hpp"
#include "prqs/numerics.hpp"
#include "prqs/rng.hpp"
#include "prqs/simulate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#ifndef PRQS_VERSION
#define PRQS_VERSION "dev"
#endif

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAbort = 3;

// Usage or data problem: message on stderr, exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt12(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

struct CommonParams {
    double alpha2 = 1.0;
    double eta = 0.9;
    std::int64_t n_rounds = 100;
    double phi_true = 0.0;
    double epsilon = 0.1;
    double delta = 0.05;
    std::uint64_t seed = 1;
    std::int64_t n_trials = 10000;
    std::string check_mode = "infinite_n";

    double alpha() const { return std::sqrt(alpha2); }

    prqs::ProtocolConfig to_config() const {
        prqs::ProtocolConfig cfg;
        cfg.alpha = alpha();
        cfg.eta = eta;
        cfg.n_rounds = n_rounds;
        cfg.phi_true = prqs::wrap_angle(phi_true);
        cfg.epsilon = epsilon;
        cfg.delta = delta;
        cfg.seed = seed;
        cfg.n_trials = n_trials;
        cfg.check_mode = parse_check_mode(check_mode);
        return cfg;
    }

    static prqs::CheckMode parse_check_mode(const std::string& s) {
        if (s == "finite_n") return prqs::CheckMode::finite_n;
        if (s == "infinite_n") return prqs::CheckMode::infinite_n;
        throw UsageError("unknown check mode '" + s + "' (expected finite_n or infinite_n)");
    }

    json to_json() const {
        return json{{"alpha2", alpha2},   {"eta", eta},
                    {"n_rounds", n_rounds}, {"phi_true", prqs::wrap_angle(phi_true)},
                    {"epsilon", epsilon}, {"delta", delta},
                    {"seed", seed},       {"n_trials", n_trials},
                    {"check_mode", check_mode}};
    }
};

struct CommonOptions {
    CLI::Option* alpha2 = nullptr;
    CLI::Option* eta = nullptr;
    CLI::Option* n_rounds = nullptr;
    CLI::Option* phi_true = nullptr;
    CLI::Option* epsilon = nullptr;
    CLI::Option* delta = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* n_trials = nullptr;
    CLI::Option* check_mode = nullptr;
    std::string config_path;
    int threads = 0;
};

CommonOptions add_common_options(CLI::App* cmd, CommonParams& p) {
    CommonOptions opts;
    opts.alpha2 = cmd->add_option("--alpha2", p.alpha2, "probe mean photon number alpha^2");
    opts.eta = cmd->add_option("--eta", p.eta, "channel transmissivity in [0,1]");
    opts.n_rounds = cmd->add_option("--n-rounds", p.n_rounds, "protocol rounds N");
    opts.phi_true = cmd->add_option("--phi", p.phi_true, "true phase (wrapped to (-pi,pi])");
    opts.epsilon = cmd->add_option("--epsilon", p.epsilon, "privacy threshold: require P >= 1-epsilon");
    opts.delta = cmd->add_option("--delta", p.delta, "confidence level of the eta lower bound");
    opts.seed = cmd->add_option("--seed", p.seed, "base RNG seed");
    opts.n_trials = cmd->add_option("--trials", p.n_trials, "Monte Carlo repetitions");
    opts.check_mode =
        cmd->add_option("--check-mode", p.check_mode, "CHECK privacy map: finite_n | infinite_n");
    cmd->add_option("--config", opts.config_path, "JSON config file (flags override file values)");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = library default)");
    return opts;
}

// Flags override file values, so only unset options are filled from the file.
void merge_config_file(const CommonOptions& opts, CommonParams& p) {
    if (opts.config_path.empty()) return;
    std::ifstream in(opts.config_path);
    if (!in) throw UsageError("cannot open config file: " + opts.config_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError("config file " + opts.config_path + ": " + e.what());
    }
    auto fill = [&](CLI::Option* opt, const char* key, auto& target) {
        if (opt->count() == 0 && j.contains(key))
            target = j.at(key).get<std::remove_reference_t<decltype(target)>>();
    };
    fill(opts.alpha2, "alpha2", p.alpha2);
    fill(opts.eta, "eta", p.eta);
    fill(opts.n_rounds, "n_rounds", p.n_rounds);
    fill(opts.phi_true, "phi_true", p.phi_true);
    fill(opts.epsilon, "epsilon", p.epsilon);
    fill(opts.delta, "delta", p.delta);
    fill(opts.seed, "seed", p.seed);
    fill(opts.n_trials, "n_trials", p.n_trials);
    fill(opts.check_mode, "check_mode", p.check_mode);
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

std::vector<std::string> parse_methods(const std::string& methods_arg) {
    std::vector<std::string> methods;
    std::stringstream ss(methods_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (tok != "exact" && tok != "asymptotic" && tok != "infinite_n" && tok != "monte_carlo")
            throw UsageError("unknown method '" + tok +
                             "' (expected exact, asymptotic, infinite_n, monte_carlo)");
        methods.push_back(tok);
    }
    if (methods.empty()) throw UsageError("no methods requested");
    return methods;
}

json summary_to_json(const prqs::EmpiricalSummary& s) {
    return json{{"mse_alice", s.mse_alice.value},
                {"mse_alice_standard_error", s.mse_alice.standard_error},
                {"mse_eve", s.mse_eve.value},
                {"mse_eve_standard_error", s.mse_eve.standard_error},
                {"privacy_empirical", s.privacy.value},
                {"privacy_standard_error", s.privacy.standard_error},
                {"bias_alice", s.bias_alice.value},
                {"bias_alice_standard_error", s.bias_alice.standard_error},
                {"pass_rate", s.pass_rate},
                {"n_trials", s.n_trials}};
}

json decision_to_json(const prqs::CheckDecision& d) {
    return json{{"eta_hat", d.eta_hat},
                {"eta_hat_clipped", d.eta_hat_clipped()},
                {"eta_lower", d.eta_lower},
                {"privacy_bound", d.privacy_bound},
                {"passed", d.passed},
                {"epsilon", d.epsilon},
                {"delta", d.delta}};
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------- point ---

int cmd_point(const CommonParams& p, const std::string& methods_arg, const std::string& out_path) {
    const auto methods = parse_methods(methods_arg);
    const double alpha = p.alpha();
    const prqs::ChannelPoint pt{alpha, p.eta, p.n_rounds};
    pt.validate();

    json results = json::object();
    for (const auto& m : methods) {
        if (m == "exact") {
            const auto ap = prqs::privacy_exact(pt);
            results["exact"] = {{"mse_alice", *ap.mse_alice},
                                {"mse_eve", *ap.mse_eve},
                                {"privacy", ap.privacy}};
        } else if (m == "asymptotic") {
            const double r = pt.received_amplitude();
            const double prob = prqs::helstrom_error_prob(pt);
            if (!prqs::asymptotic_regime_ok(r, prob, p.n_rounds))
                std::cerr << "warning: asymptotic expansion outside its validity regime "
                             "(N (1-2p)^2 r^2 < 1)\n";
            results["asymptotic"] = {{"mse_alice", prqs::mse_alice_asymptotic(r, p.n_rounds)},
                                     {"mse_eve", prqs::mse_eve_asymptotic(r, prob, p.n_rounds)},
                                     {"privacy", prqs::privacy_asymptotic(r, prob, p.n_rounds)}};
        } else if (m == "infinite_n") {
            results["infinite_n"] = {{"mse_alice", nullptr},
                                     {"mse_eve", nullptr},
                                     {"privacy", prqs::privacy_infinity(alpha, p.eta)}};
        } else {  // monte_carlo
            auto cfg = p.to_config();
            if (cfg.n_trials < 2) throw UsageError("monte_carlo method needs --trials >= 2");
            results["monte_carlo"] = summary_to_json(prqs::run_experiment(cfg));
        }
    }

    json out{{"tool_version", PRQS_VERSION},
             {"command", "point"},
             {"config", p.to_json()},
             {"results", results}};
    write_text(out_path, out.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------- sweep ---

std::vector<double> parse_grid(const std::string& grid_arg) {
    std::vector<double> grid;
    if (grid_arg.find(':') != std::string::npos) {
        // min:max:count[:lin|log]
        std::vector<std::string> parts;
        std::stringstream ss(grid_arg);
        std::string tok;
        while (std::getline(ss, tok, ':')) parts.push_back(tok);
        if (parts.size() < 3 || parts.size() > 4)
            throw UsageError("grid spec must be min:max:count[:lin|log] or a comma list");
        const double lo = std::stod(parts[0]);
        const double hi = std::stod(parts[1]);
        const long count = std::stol(parts[2]);
        const std::string scale = parts.size() == 4 ? parts[3] : "lin";
        if (count < 2 || !(hi > lo)) throw UsageError("grid spec needs max > min and count >= 2");
        if (scale == "log") {
            if (!(lo > 0.0)) throw UsageError("log grid needs min > 0");
            const double llo = std::log(lo), lhi = std::log(hi);
            for (long i = 0; i < count; ++i)
                grid.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                                  static_cast<double>(count - 1)));
        } else if (scale == "lin") {
            for (long i = 0; i < count; ++i)
                grid.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                        static_cast<double>(count - 1));
        } else {
            throw UsageError("grid scale must be lin or log");
        }
    } else {
        std::stringstream ss(grid_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            grid.push_back(std::stod(tok));
        }
    }
    if (grid.empty()) throw UsageError("empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw UsageError("grid must be strictly increasing");
    return grid;
}

struct SweepCells {
    std::string mse_alice, mse_eve, privacy, mse_alice_se, mse_eve_se;
};

void run_sweep(const std::string& axis, const std::vector<double>& grid,
               const CommonParams& fixed, const std::vector<std::string>& methods,
               std::ostream& out) {
    out << "# prqs sweep v1\n";
    out << "alpha2,eta,n_rounds,method,mse_alice,mse_eve,privacy,mse_alice_se,mse_eve_se\n";

    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        CommonParams p = fixed;
        if (axis == "alpha2") {
            p.alpha2 = grid[gi];
        } else if (axis == "eta") {
            p.eta = grid[gi];
        } else if (axis == "n_rounds") {
            const double v = grid[gi];
            if (v < 1.0 || v != std::floor(v))
                throw UsageError("n_rounds grid values must be positive integers");
            p.n_rounds = static_cast<std::int64_t>(v);
        } else {
            throw UsageError("unknown sweep axis '" + axis + "'");
        }

        const prqs::ChannelPoint pt{p.alpha(), p.eta, p.n_rounds};
        pt.validate();

        for (const auto& m : methods) {
            SweepCells cells;
            try {
                if (m == "exact") {
                    const auto ap = prqs::privacy_exact(pt);
                    cells.mse_alice = fmt12(*ap.mse_alice);
                    cells.mse_eve = fmt12(*ap.mse_eve);
                    cells.privacy = fmt12(ap.privacy);
                } else if (m == "asymptotic") {
                    const double r = pt.received_amplitude();
                    const double prob = prqs::helstrom_error_prob(pt);
                    cells.mse_alice = fmt12(prqs::mse_alice_asymptotic(r, p.n_rounds));
                    cells.mse_eve = fmt12(prqs::mse_eve_asymptotic(r, prob, p.n_rounds));
                    cells.privacy = fmt12(prqs::privacy_asymptotic(r, prob, p.n_rounds));
                } else if (m == "infinite_n") {
                    cells.privacy = fmt12(prqs::privacy_infinity(p.alpha(), p.eta));
                } else {  // monte_carlo
                    auto cfg = p.to_config();
                    // decorrelate grid points without touching the base seed
                    cfg.seed = prqs::SplitMix64{fixed.seed ^ (0x51ed2701ULL + gi)}.next();
                    const auto s = prqs::run_experiment(cfg);
                    cells.mse_alice = fmt12(s.mse_alice.value);
                    cells.mse_eve = fmt12(s.mse_eve.value);
                    cells.privacy = fmt12(s.privacy.value);
                    cells.mse_alice_se = fmt12(s.mse_alice.standard_error);
                    cells.mse_eve_se = fmt12(s.mse_eve.standard_error);
                }
            } catch (const std::domain_error&) {
                // method undefined at this point (e.g. expansion at p >= 1/2
                // or r = 0): leave the cells empty
            }
            out << fmt12(p.alpha2) << ',' << fmt12(p.eta) << ',' << p.n_rounds << ',' << m << ','
                << cells.mse_alice << ',' << cells.mse_eve << ',' << cells.privacy << ','
                << cells.mse_alice_se << ',' << cells.mse_eve_se << '\n';
        }
    }
}

int cmd_sweep(const std::string& axis, const std::string& grid_arg, const CommonParams& fixed,
              const std::string& methods_arg, const std::string& out_path) {
    const auto methods = parse_methods(methods_arg);
    const auto grid = parse_grid(grid_arg);
    std::ostringstream body;
    run_sweep(axis, grid, fixed, methods, body);
    write_text(out_path, body.str());
    return kExitOk;
}

// ------------------------------------------------------------- simulate ---

int cmd_simulate(const CommonParams& p, const std::string& out_prefix) {
    auto cfg = p.to_config();
    if (cfg.n_trials < 2) throw UsageError("simulate needs --trials >= 2");

    const auto trials = prqs::run_trials(cfg);
    const auto summary = prqs::summarize(trials, cfg);

    std::ostringstream csv;
    csv << "# prqs trials v1\n";
    csv << "trial,phi_hat_alice,phi_hat_eve,eta_hat,check_passed\n";
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        csv << i << ',' << fmt12(t.phi_hat_alice) << ',' << fmt12(t.phi_hat_eve) << ','
            << fmt12(t.eta_hat) << ',' << (t.check.passed ? 1 : 0) << '\n';
    }
    write_text(out_prefix + "_trials.csv", csv.str());

    json out{{"tool_version", PRQS_VERSION},
             {"command", "simulate"},
             {"config", p.to_json()},
             {"summary", summary_to_json(summary)}};
    write_text(out_prefix + "_summary.json", out.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------- check ---

std::vector<std::complex<double>> read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open data file: " + path);

    std::vector<std::complex<double>> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw UsageError(path + ": line " + std::to_string(line_no) +
                             ": expected two comma-separated columns re,im");
        const std::string re_str = line.substr(0, comma);
        const std::string im_str = line.substr(comma + 1);

        auto parse = [&](const std::string& s, double& v) {
            const char* b = s.data();
            const char* e = s.data() + s.size();
            while (b < e && (*b == ' ' || *b == '\t')) ++b;
            auto res = std::from_chars(b, e, v);
            if (res.ec != std::errc{}) return false;
            for (const char* q = res.ptr; q < e; ++q)
                if (*q != ' ' && *q != '\t') return false;
            return true;
        };
        double re, im;
        if (!parse(re_str, re) || !parse(im_str, im)) {
            // allow a single header row naming the columns
            if (samples.empty() && re_str.find("re") != std::string::npos &&
                im_str.find("im") != std::string::npos)
                continue;
            throw UsageError(path + ": line " + std::to_string(line_no) +
                             ": cannot parse '" + line + "' as re,im");
        }
        samples.emplace_back(re, im);
    }
    if (samples.empty()) throw UsageError(path + ": no samples found");
    return samples;
}

int cmd_check(const std::string& data_path, double alpha2, std::int64_t n_rounds_arg,
              double epsilon, double delta, const std::string& mode_str,
              const std::string& estimator) {
    if (!(alpha2 > 0.0)) throw UsageError("check needs --alpha2 > 0");
    const auto mode = CommonParams::parse_check_mode(mode_str);
    const auto samples = read_samples_csv(data_path);
    const std::int64_t n_samples = static_cast<std::int64_t>(samples.size());
    const std::int64_t n_rounds = n_rounds_arg > 0 ? n_rounds_arg : n_samples;

    prqs::SignedDataset data{samples, std::sqrt(alpha2)};

    prqs::CheckDecision decision;
    if (estimator == "ml") {
        decision = prqs::run_check(data, n_rounds, epsilon, delta, mode);
        if (!prqs::gaussian_bound_regime_ok(data.mean(), n_samples, data.alpha))
            std::cerr << "warning: N eta alpha^2 < 10, the Gaussian bound on eta is unreliable\n";
    } else if (estimator == "moment") {
        // Experimental sign-free path: point estimate only, no confidence
        // subtraction.
        std::cerr << "warning: moment estimator is experimental (point estimate, no confidence "
                     "bound)\n";
        const double eta_hat = prqs::moment_transmissivity(data);
        const double eta_clip = std::clamp(eta_hat, 0.0, 1.0);
        decision.eta_hat = eta_hat;
        decision.eta_lower = eta_clip;
        decision.epsilon = epsilon;
        decision.delta = delta;
        decision.privacy_bound =
            (mode == prqs::CheckMode::infinite_n)
                ? prqs::privacy_infinity(data.alpha, eta_clip)
                : prqs::privacy_exact(prqs::ChannelPoint{data.alpha, eta_clip, n_rounds}).privacy;
        decision.passed = decision.privacy_bound >= 1.0 - epsilon;
    } else {
        throw UsageError("unknown --eta-estimator '" + estimator + "' (expected ml or moment)");
    }

    json out{{"tool_version", PRQS_VERSION},
             {"command", "check"},
             {"n_samples", n_samples},
             {"n_rounds", n_rounds},
             {"mode", mode_str},
             {"estimator", estimator},
             {"decision", decision_to_json(decision)}};
    std::cout << out.dump(2) << "\n";
    return decision.passed ? kExitOk : kExitAbort;
}

// ----------------------------------------------------------------- fig2 ---

int cmd_fig2(const CommonParams& p, const std::string& out_dir, int points) {
    if (points < 2) throw UsageError("fig2 needs --points >= 2");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const std::vector<std::string> methods{"exact", "asymptotic"};

    // error and privacy against the probe energy, fixed transmissivity
    {
        const auto grid = parse_grid("0.01:100:" + std::to_string(points) + ":log");
        std::ostringstream body;
        run_sweep("alpha2", grid, p, methods, body);
        write_text((fs::path(out_dir) / "fig2_vs_alpha2.csv").string(), body.str());
    }
    // error and privacy against the transmissivity, fixed probe energy
    {
        const auto grid = parse_grid("0.02:0.998:" + std::to_string(points) + ":lin");
        std::ostringstream body;
        run_sweep("eta", grid, p, methods, body);
        write_text((fs::path(out_dir) / "fig2_vs_eta.csv").string(), body.str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prqs: estimation error and privacy lab for a binary-phase coherent-state "
                 "remote sensing protocol over a lossy channel"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(PRQS_VERSION));

    // point
    CommonParams point_params;
    std::string point_methods = "exact";
    std::string point_out;
    auto* point = app.add_subcommand("point", "evaluate figures of merit at one parameter point");
    auto point_opts = add_common_options(point, point_params);
    point->add_option("--methods", point_methods,
                      "comma list of exact,asymptotic,infinite_n,monte_carlo");
    point->add_option("--out", point_out, "output JSON path (default stdout)");

    // sweep
    CommonParams sweep_params;
    std::string sweep_axis = "alpha2", sweep_grid, sweep_methods = "exact", sweep_out;
    auto* sweep = app.add_subcommand("sweep", "scan one axis and write a CSV of figures of merit");
    auto sweep_opts = add_common_options(sweep, sweep_params);
    sweep->add_option("--axis", sweep_axis, "alpha2 | eta | n_rounds");
    sweep->add_option("--grid", sweep_grid, "comma list or min:max:count[:lin|log]")->required();
    sweep->add_option("--methods", sweep_methods,
                      "comma list of exact,asymptotic,infinite_n,monte_carlo");
    sweep->add_option("--out", sweep_out, "output CSV path")->required();

    // simulate
    CommonParams sim_params;
    std::string sim_out;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo protocol run: per-trial CSV + JSON summary");
    auto sim_opts = add_common_options(sim, sim_params);
    sim->add_option("--out", sim_out, "output prefix (writes <prefix>_trials.csv, <prefix>_summary.json)")
        ->required();

    // check
    std::string check_data, check_mode = "infinite_n", check_estimator = "ml";
    double check_alpha2 = 0.0, check_epsilon = 0.1, check_delta = 0.05;
    std::int64_t check_rounds = 0;
    auto* check = app.add_subcommand("check", "CHECK-phase decision on a re,im CSV of sign-corrected outcomes");
    check->add_option("--data", check_data, "CSV file with columns re,im")->required();
    check->add_option("--alpha2", check_alpha2, "probe mean photon number alpha^2")->required();
    check->add_option("--n-rounds", check_rounds, "protocol rounds (default: sample count)");
    check->add_option("--epsilon", check_epsilon, "privacy threshold: require bound >= 1-epsilon");
    check->add_option("--delta", check_delta, "confidence level of the eta lower bound");
    check->add_option("--mode", check_mode, "finite_n | infinite_n");
    check->add_option("--eta-estimator", check_estimator, "ml | moment (moment is experimental)");

    // fig2
    CommonParams fig2_params;
    std::string fig2_out = ".";
    int fig2_points = 50;
    auto* fig2 = app.add_subcommand(
        "fig2", "preset sweeps: error and privacy vs alpha^2 and vs eta (exact + asymptotic)");
    auto fig2_opts = add_common_options(fig2, fig2_params);
    fig2->add_option("--out", fig2_out, "output directory");
    fig2->add_option("--points", fig2_points, "grid points per sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (point->parsed()) {
            merge_config_file(point_opts, point_params);
            apply_threads(point_opts.threads);
            return cmd_point(point_params, point_methods, point_out);
        }
        if (sweep->parsed()) {
            merge_config_file(sweep_opts, sweep_params);
            apply_threads(sweep_opts.threads);
            return cmd_sweep(sweep_axis, sweep_grid, sweep_params, sweep_methods, sweep_out);
        }
        if (sim->parsed()) {
            merge_config_file(sim_opts, sim_params);
            apply_threads(sim_opts.threads);
            return cmd_simulate(sim_params, sim_out);
        }
        if (check->parsed()) {
            return cmd_check(check_data, check_alpha2, check_rounds, check_epsilon, check_delta,
                             check_mode, check_estimator);
        }
        if (fig2->parsed()) {
            merge_config_file(fig2_opts, fig2_params);
            apply_threads(fig2_opts.threads);
            return cmd_fig2(fig2_params, fig2_out, fig2_points);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
