#include "prqs/simulate.hpp"

#include <cmath>
#include <limits>

namespace prqs {

namespace {

constexpr std::int64_t kChunk = 4096;

struct RoundContext {
    std::complex<double> signal;  // sqrt(eta) * alpha * e^{i phi}
    double flip_prob;

    explicit RoundContext(const ProtocolConfig& cfg)
        : signal(std::polar(std::sqrt(cfg.eta) * cfg.alpha, cfg.phi_true)),
          flip_prob(helstrom_error_prob(cfg.alpha, cfg.eta)) {}
};

RoundRecord draw_round(const RoundContext& ctx, Xoshiro256pp& rng) {
    const int sign = rng.uniform() < 0.5 ? +1 : -1;
    const std::complex<double> noise = rng.complex_normal();
    const bool flip = rng.uniform() < ctx.flip_prob;
    RoundRecord rec;
    rec.alice_sign = sign;
    rec.bob_outcome = ctx.signal * static_cast<double>(sign) + noise;
    rec.eve_decision = flip ? -sign : sign;
    return rec;
}

TrialResult run_trial_with_context(const ProtocolConfig& cfg, const RoundContext& ctx,
                                   std::int64_t trial_index) {
    Xoshiro256pp rng = Xoshiro256pp::stream(cfg.seed, static_cast<std::uint64_t>(trial_index));

    std::complex<double> sum_alice{0.0, 0.0};
    std::complex<double> sum_eve{0.0, 0.0};
    for (std::int64_t i = 0; i < cfg.n_rounds; ++i) {
        const RoundRecord rec = draw_round(ctx, rng);
        sum_alice += rec.bob_outcome * static_cast<double>(rec.alice_sign);
        sum_eve += rec.bob_outcome * static_cast<double>(rec.eve_decision);
    }
    const double n = static_cast<double>(cfg.n_rounds);
    const std::complex<double> mean_alice = sum_alice / n;
    const std::complex<double> mean_eve = sum_eve / n;

    TrialResult result;
    result.phi_hat_alice = ml_phase(mean_alice);
    result.phi_hat_eve = ml_phase(mean_eve);
    if (cfg.alpha > 0.0) {
        result.eta_hat = ml_transmissivity(mean_alice, cfg.alpha);
        result.check = run_check(mean_alice, cfg.n_rounds, cfg.alpha, cfg.n_rounds, cfg.epsilon,
                                 cfg.delta, cfg.check_mode);
    } else {
        result.eta_hat = std::numeric_limits<double>::quiet_NaN();
        result.check = CheckDecision{};
        result.check.eta_hat = result.eta_hat;
        result.check.eta_lower = std::numeric_limits<double>::quiet_NaN();
        result.check.privacy_bound = std::numeric_limits<double>::quiet_NaN();
        result.check.epsilon = cfg.epsilon;
        result.check.delta = cfg.delta;
    }
    return result;
}

// Per-chunk running sums of the wrapped errors and their powers. Trials are
// always accumulated in ascending index order within a chunk and chunks are
// combined in order, so the reduction is independent of scheduling.
struct ChunkSums {
    double err_alice = 0.0;       // sum e_A
    double err2_alice = 0.0;      // sum e_A^2
    double err4_alice = 0.0;      // sum e_A^4
    double err2_eve = 0.0;        // sum e_E^2
    double err4_eve = 0.0;        // sum e_E^4
    double err2_cross = 0.0;      // sum e_A^2 e_E^2
    std::int64_t n_passed = 0;

    void add(const TrialResult& trial, double phi_true) {
        const double ea = wrap_angle(trial.phi_hat_alice - phi_true);
        const double ee = wrap_angle(trial.phi_hat_eve - phi_true);
        err_alice += ea;
        err2_alice += ea * ea;
        err4_alice += (ea * ea) * (ea * ea);
        err2_eve += ee * ee;
        err4_eve += (ee * ee) * (ee * ee);
        err2_cross += (ea * ea) * (ee * ee);
        if (trial.check.passed) ++n_passed;
    }

    void merge(const ChunkSums& o) {
        err_alice += o.err_alice;
        err2_alice += o.err2_alice;
        err4_alice += o.err4_alice;
        err2_eve += o.err2_eve;
        err4_eve += o.err4_eve;
        err2_cross += o.err2_cross;
        n_passed += o.n_passed;
    }
};

EmpiricalSummary finalize(const ChunkSums& total, const ProtocolConfig& cfg) {
    const double n = static_cast<double>(cfg.n_trials);

    auto mean_with_error = [&](double sum, double sum_sq) {
        ValueWithError out;
        out.value = sum / n;
        const double var = std::max(0.0, (sum_sq - n * out.value * out.value) / (n - 1.0));
        out.standard_error = std::sqrt(var / n);
        return out;
    };

    EmpiricalSummary s;
    s.n_trials = cfg.n_trials;
    s.mse_alice = mean_with_error(total.err2_alice, total.err4_alice);
    s.mse_eve = mean_with_error(total.err2_eve, total.err4_eve);
    s.bias_alice = mean_with_error(total.err_alice, total.err2_alice);
    s.pass_rate = static_cast<double>(total.n_passed) / n;

    const double ma = s.mse_alice.value;
    const double me = s.mse_eve.value;
    s.privacy.value = 1.0 - ma / me;
    // delta method on the ratio, covariance included
    const double cov = (total.err2_cross - n * ma * me) / (n - 1.0);
    const double var_a = s.mse_alice.standard_error * s.mse_alice.standard_error;
    const double var_e = s.mse_eve.standard_error * s.mse_eve.standard_error;
    const double ratio = ma / me;
    const double var_ratio =
        ratio * ratio * (var_a / (ma * ma) + var_e / (me * me) - 2.0 * cov / (n * ma * me));
    s.privacy.standard_error = std::sqrt(std::max(0.0, var_ratio));
    return s;
}

ChunkSums accumulate_chunk(const ProtocolConfig& cfg, const RoundContext& ctx, std::int64_t begin,
                           std::int64_t end) {
    ChunkSums sums;
    for (std::int64_t t = begin; t < end; ++t)
        sums.add(run_trial_with_context(cfg, ctx, t), cfg.phi_true);
    return sums;
}

}  // namespace

void ProtocolConfig::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::domain_error("ProtocolConfig: alpha must be finite and >= 0");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("ProtocolConfig: eta must lie in [0,1]");
    if (n_rounds < 1) throw std::domain_error("ProtocolConfig: n_rounds must be >= 1");
    if (!(phi_true > -std::numbers::pi && phi_true <= std::numbers::pi))
        throw std::domain_error("ProtocolConfig: phi_true must lie in (-pi, pi]");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::domain_error("ProtocolConfig: epsilon must lie in (0,1]");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::domain_error("ProtocolConfig: delta must lie in (0,1)");
    if (n_trials < 1) throw std::domain_error("ProtocolConfig: n_trials must be >= 1");
}

RoundRecord sample_round(const ProtocolConfig& config, Xoshiro256pp& rng) {
    config.validate();
    return draw_round(RoundContext(config), rng);
}

TrialResult run_trial(const ProtocolConfig& config, std::int64_t trial_index) {
    config.validate();
    return run_trial_with_context(config, RoundContext(config), trial_index);
}

std::vector<TrialResult> run_trials(const ProtocolConfig& config) {
    config.validate();
    const RoundContext ctx(config);
    std::vector<TrialResult> trials(static_cast<std::size_t>(config.n_trials));
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t t = 0; t < config.n_trials; ++t)
        trials[static_cast<std::size_t>(t)] = run_trial_with_context(config, ctx, t);
    return trials;
}

EmpiricalSummary run_experiment(const ProtocolConfig& config) {
    config.validate();
    if (config.n_trials < 2)
        throw std::invalid_argument("run_experiment: n_trials >= 2 required for standard errors");

    const RoundContext ctx(config);
    const std::int64_t n_chunks = (config.n_trials + kChunk - 1) / kChunk;
    std::vector<ChunkSums> partial(static_cast<std::size_t>(n_chunks));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(config.n_trials, begin + kChunk);
        partial[static_cast<std::size_t>(c)] = accumulate_chunk(config, ctx, begin, end);
    }

    ChunkSums total;
    for (const auto& part : partial) total.merge(part);
    return finalize(total, config);
}

EmpiricalSummary run_experiment_serial(const ProtocolConfig& config) {
    config.validate();
    if (config.n_trials < 2)
        throw std::invalid_argument("run_experiment_serial: n_trials >= 2 required");

    const RoundContext ctx(config);
    ChunkSums total;
    for (std::int64_t t = 0; t < config.n_trials; ++t)
        total.add(run_trial_with_context(config, ctx, t), config.phi_true);
    return finalize(total, config);
}

EmpiricalSummary summarize(std::span<const TrialResult> trials, const ProtocolConfig& config) {
    config.validate();
    if (static_cast<std::int64_t>(trials.size()) != config.n_trials)
        throw std::invalid_argument("summarize: trial count does not match config");
    if (config.n_trials < 2) throw std::invalid_argument("summarize: n_trials >= 2 required");

    const std::int64_t n_chunks = (config.n_trials + kChunk - 1) / kChunk;
    ChunkSums total;
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(config.n_trials, begin + kChunk);
        ChunkSums sums;
        for (std::int64_t t = begin; t < end; ++t)
            sums.add(trials[static_cast<std::size_t>(t)], config.phi_true);
        total.merge(sums);
    }
    return finalize(total, config);
}

}  // namespace prqs
