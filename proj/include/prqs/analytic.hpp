#pragma once

// Closed-form and quadrature figures of merit for the BPSK remote-sensing
// protocol: the optimal binary-discrimination error probability seen by the
// eavesdropper, the angular posterior of the phase estimator, exact MSEs for
// the legitimate user and the eavesdropper, their large-N expansions, and the
// privacy derived from the MSE ratio.

#include <cstdint>
#include <optional>
#include <string>

#include "prqs/numerics.hpp"

namespace prqs {

// One physical operating point: launch amplitude, channel transmissivity,
// number of rounds. The received amplitude r = sqrt(eta) * alpha is derived.
struct ChannelPoint {
    double alpha = 0.0;
    double eta = 1.0;
    std::int64_t n_rounds = 1;

    double received_amplitude() const;

    void validate() const;
};

enum class Method { exact, asymptotic, infinite_n };

const char* method_name(Method m);

// Bundled figures of merit; the mse fields are absent for methods that only
// define a privacy value (the infinite-round limit).
struct AnalyticPoint {
    std::optional<double> mse_alice;
    std::optional<double> mse_eve;
    double privacy = 0.0;
    Method method = Method::exact;
};

// Minimum error probability for distinguishing the two coherent states the
// eavesdropper holds, p = (1 - sqrt(1 - exp(-4 (1-eta) alpha^2))) / 2.
double helstrom_error_prob(double alpha, double eta);
double helstrom_error_prob(const ChannelPoint& point);

// Density of the phase estimate around the true phase after n_rounds at
// received amplitude r. Negative r is allowed (the peak moves to +-pi),
// which the mixture over discrimination errors relies on. Evaluated through
// the scaled complementary error function so it stays finite up to
// n_rounds * r^2 ~ 1e8.
double angular_pdf(double theta, double r, std::int64_t n_rounds);

// Second angular moment of angular_pdf: the estimator's mean-square error.
double mse_alice_exact(double r, std::int64_t n_rounds, const QuadratureSpec& spec = {});

// Eavesdropper MSE: binomial mixture over k discrimination errors of the
// user MSE at effective amplitude r * (1 - 2k/N). Terms whose weight is
// below 1e-18 of the peak weight are dropped; their mass is bounded against
// the quadrature tolerance.
double mse_eve_exact(const ChannelPoint& point, const QuadratureSpec& spec = {});
double mse_eve_exact(const ChannelPoint& point, double error_prob, const QuadratureSpec& spec = {});

// privacy = 1 - mse_alice / mse_eve, no clipping: a negative value would
// flag a numerical defect, not a physical regime.
AnalyticPoint privacy_exact(const ChannelPoint& point, const QuadratureSpec& spec = {});

// Large-N expansions, second order in 1/N.
double mse_alice_asymptotic(double r, std::int64_t n_rounds);
double mse_eve_asymptotic(double r, double error_prob, std::int64_t n_rounds);

// Ratio form 1 - mse_alice_asymptotic / mse_eve_asymptotic.
double privacy_asymptotic(double r, double error_prob, std::int64_t n_rounds);

// Validity of the expansion: N (1-2p)^2 r^2 >= 1 (and p < 1/2).
bool asymptotic_regime_ok(double r, double error_prob, std::int64_t n_rounds);

// Infinite-round privacy limit exp(-4 alpha^2 (1 - eta)).
double privacy_infinity(double alpha, double eta);

// E[mean^-k] for the mean of n_rounds iid draws with mean mu and variance
// sigma2, truncated at the Gaussian-fluctuation term:
// mu^-k (1 + k(k+1) sigma2 / (2 N mu^2)), k in {2, 4}.
double edgeworth_inverse_moment(double mu, double sigma2, std::int64_t n_rounds, int k);

}  // namespace prqs
