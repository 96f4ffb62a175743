#pragma once

// Maximum-likelihood estimators on sign-corrected heterodyne data and the
// CHECK-phase decision: a one-sided confidence bound on the transmissivity
// is pushed through the privacy curve and compared against the agreed
// threshold.

#include <complex>
#include <cstdint>
#include <vector>

#include "prqs/analytic.hpp"
#include "prqs/numerics.hpp"

namespace prqs {

// Sign-corrected heterodyne outcomes together with the launch amplitude used
// for normalization.
struct SignedDataset {
    std::vector<std::complex<double>> samples;
    double alpha = 0.0;

    std::complex<double> mean() const;
};

enum class CheckMode { finite_n, infinite_n };

struct CheckDecision {
    double eta_hat = 0.0;    // raw ML estimate, may exceed 1 under noise
    double eta_lower = 0.0;  // one-sided (1-delta) lower confidence bound, clipped to [0,1]
    double privacy_bound = 0.0;
    bool passed = false;
    double epsilon = 0.0;
    double delta = 0.0;

    double eta_hat_clipped() const;
};

// arg of the sample mean, wrapped to (-pi, pi]; arg(0) is defined as 0.
double ml_phase(const SignedDataset& data);
double ml_phase(std::complex<double> mean);

// |mean / alpha|^2, returned raw (clipping to [0,1] is the caller's choice).
double ml_transmissivity(const SignedDataset& data);
double ml_transmissivity(std::complex<double> mean, double alpha);

// Sign-free moment estimator (mean |sample|^2 - 1) / alpha^2. Experimental:
// usable when the modulation signs are not available, at the cost of a much
// noisier estimate.
double moment_transmissivity(const SignedDataset& data);

// Plug-in privacy estimate: the exact privacy evaluated at the clipped ML
// transmissivity.
double ml_privacy(const SignedDataset& data, std::int64_t n_rounds,
                  const QuadratureSpec& spec = {});

// One-sided (1-delta) lower bound on eta from the Gaussian amplitude model
// |mean| ~ Normal(r, 1/(2n)). The quantile subtraction is floored at zero,
// so delta -> 1 degenerates to the clipped point estimate.
double eta_lower_bound(const SignedDataset& data, double delta);
double eta_lower_bound(std::complex<double> mean, std::int64_t n_samples, double alpha,
                       double delta);

// Heuristic validity flag for the Gaussian bound: n * eta_hat * alpha^2 >= 10.
bool gaussian_bound_regime_ok(std::complex<double> mean, std::int64_t n_samples, double alpha);

// Full CHECK decision. In infinite_n mode the bound is pushed through the
// infinite-round privacy limit; in finite_n mode through the exact
// quadrature privacy at n_rounds.
CheckDecision run_check(const SignedDataset& data, std::int64_t n_rounds, double epsilon,
                        double delta, CheckMode mode, const QuadratureSpec& spec = {});
CheckDecision run_check(std::complex<double> mean, std::int64_t n_samples, double alpha,
                        std::int64_t n_rounds, double epsilon, double delta, CheckMode mode,
                        const QuadratureSpec& spec = {});

}  // namespace prqs
