#pragma once

// Monte Carlo engine for the full protocol round trip: BPSK modulation, the
// lossy channel, phase encoding, heterodyne detection, and an eavesdropper
// performing optimal round-by-round discrimination. Trials draw from
// per-trial random streams keyed by (seed, trial index), so results are
// reproducible for any execution order and thread count.
//
// run_experiment is the OpenMP kernel (chunked, order-fixed reduction);
// run_experiment_serial is the plain reference loop kept for testing and for
// the benchmark target.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "prqs/estimators.hpp"
#include "prqs/rng.hpp"

namespace prqs {

struct ProtocolConfig {
    double alpha = 1.0;
    double eta = 1.0;
    std::int64_t n_rounds = 100;
    double phi_true = 0.0;
    double epsilon = 0.1;
    double delta = 0.05;
    std::uint64_t seed = 0;
    std::int64_t n_trials = 1;
    CheckMode check_mode = CheckMode::infinite_n;

    void validate() const;
};

struct RoundRecord {
    int alice_sign;                     // +-1
    std::complex<double> bob_outcome;   // sqrt(eta) s alpha e^{i phi} + noise
    int eve_decision;                   // +-1, flipped with the discrimination error prob
};

struct TrialResult {
    double phi_hat_alice;
    double phi_hat_eve;
    double eta_hat;  // NaN when alpha == 0
    CheckDecision check;
};

struct ValueWithError {
    double value = 0.0;
    double standard_error = 0.0;
};

struct EmpiricalSummary {
    ValueWithError mse_alice;
    ValueWithError mse_eve;
    ValueWithError privacy;     // 1 - mse_alice / mse_eve, delta-method error
    ValueWithError bias_alice;  // mean wrapped error
    double pass_rate = 0.0;
    std::int64_t n_trials = 0;
};

// One protocol round from the given stream: 4 RNG words per round.
RoundRecord sample_round(const ProtocolConfig& config, Xoshiro256pp& rng);

// N rounds on stream (seed, trial_index); estimates and CHECK from the
// aggregated signed means.
TrialResult run_trial(const ProtocolConfig& config, std::int64_t trial_index);

// All trials, evaluated in parallel, returned in trial order.
std::vector<TrialResult> run_trials(const ProtocolConfig& config);

// Streaming parallel aggregation (requires n_trials >= 2). Bitwise
// reproducible across thread counts, and bitwise equal to summarize() over
// run_trials() output.
EmpiricalSummary run_experiment(const ProtocolConfig& config);

// Reference implementation: sequential trial loop, straight running sums.
EmpiricalSummary run_experiment_serial(const ProtocolConfig& config);

// Aggregate stored trials with the same chunked reduction as run_experiment.
EmpiricalSummary summarize(std::span<const TrialResult> trials, const ProtocolConfig& config);

}  // namespace prqs
