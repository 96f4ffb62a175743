#include "prqs/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace prqs {

namespace {

void require_non_empty(const SignedDataset& data, const char* fn) {
    if (data.samples.empty())
        throw std::invalid_argument(std::string(fn) + ": dataset is empty");
}

void require_alpha(double alpha, const char* fn) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::domain_error(std::string(fn) + ": alpha must be finite and positive");
}

}  // namespace

std::complex<double> SignedDataset::mean() const {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& z : samples) sum += z;
    return sum / static_cast<double>(samples.size());
}

double CheckDecision::eta_hat_clipped() const { return std::clamp(eta_hat, 0.0, 1.0); }

double ml_phase(std::complex<double> mean) {
    if (mean.real() == 0.0 && mean.imag() == 0.0) return 0.0;
    double phi = std::arg(mean);
    if (phi <= -std::numbers::pi) phi = std::numbers::pi;
    return phi;
}

double ml_phase(const SignedDataset& data) {
    require_non_empty(data, "ml_phase");
    return ml_phase(data.mean());
}

double ml_transmissivity(std::complex<double> mean, double alpha) {
    require_alpha(alpha, "ml_transmissivity");
    return std::norm(mean) / (alpha * alpha);
}

double ml_transmissivity(const SignedDataset& data) {
    require_non_empty(data, "ml_transmissivity");
    return ml_transmissivity(data.mean(), data.alpha);
}

double moment_transmissivity(const SignedDataset& data) {
    require_non_empty(data, "moment_transmissivity");
    require_alpha(data.alpha, "moment_transmissivity");
    double sum = 0.0;
    for (const auto& z : data.samples) sum += std::norm(z);
    const double mean_power = sum / static_cast<double>(data.samples.size());
    return (mean_power - 1.0) / (data.alpha * data.alpha);
}

double ml_privacy(const SignedDataset& data, std::int64_t n_rounds, const QuadratureSpec& spec) {
    require_non_empty(data, "ml_privacy");
    const double eta_hat = std::clamp(ml_transmissivity(data), 0.0, 1.0);
    return privacy_exact(ChannelPoint{data.alpha, eta_hat, n_rounds}, spec).privacy;
}

double eta_lower_bound(std::complex<double> mean, std::int64_t n_samples, double alpha,
                       double delta) {
    require_alpha(alpha, "eta_lower_bound");
    if (n_samples < 1) throw std::domain_error("eta_lower_bound: need at least one sample");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::domain_error("eta_lower_bound: delta must lie in (0,1)");

    const double amp = std::abs(mean);
    // Negative quantiles (delta > 1/2) are floored so the bound never
    // exceeds the point estimate.
    const double quantile = std::max(0.0, normal_quantile(1.0 - delta));
    const double amp_lower =
        std::max(0.0, amp - quantile / std::sqrt(2.0 * static_cast<double>(n_samples)));
    const double eta = (amp_lower / alpha) * (amp_lower / alpha);
    return std::min(1.0, eta);
}

double eta_lower_bound(const SignedDataset& data, double delta) {
    require_non_empty(data, "eta_lower_bound");
    return eta_lower_bound(data.mean(), static_cast<std::int64_t>(data.samples.size()),
                           data.alpha, delta);
}

bool gaussian_bound_regime_ok(std::complex<double> mean, std::int64_t n_samples, double alpha) {
    if (!(alpha > 0.0) || n_samples < 1) return false;
    const double eta_hat = std::clamp(ml_transmissivity(mean, alpha), 0.0, 1.0);
    return static_cast<double>(n_samples) * eta_hat * alpha * alpha >= 10.0;
}

CheckDecision run_check(std::complex<double> mean, std::int64_t n_samples, double alpha,
                        std::int64_t n_rounds, double epsilon, double delta, CheckMode mode,
                        const QuadratureSpec& spec) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::domain_error("run_check: epsilon must lie in (0,1]");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::domain_error("run_check: delta must lie in (0,1)");

    CheckDecision decision;
    decision.epsilon = epsilon;
    decision.delta = delta;
    decision.eta_hat = ml_transmissivity(mean, alpha);
    decision.eta_lower = eta_lower_bound(mean, n_samples, alpha, delta);
    decision.privacy_bound =
        (mode == CheckMode::infinite_n)
            ? privacy_infinity(alpha, decision.eta_lower)
            : privacy_exact(ChannelPoint{alpha, decision.eta_lower, n_rounds}, spec).privacy;
    decision.passed = decision.privacy_bound >= 1.0 - epsilon;
    return decision;
}

CheckDecision run_check(const SignedDataset& data, std::int64_t n_rounds, double epsilon,
                        double delta, CheckMode mode, const QuadratureSpec& spec) {
    require_non_empty(data, "run_check");
    return run_check(data.mean(), static_cast<std::int64_t>(data.samples.size()), data.alpha,
                     n_rounds, epsilon, delta, mode, spec);
}

}  // namespace prqs
