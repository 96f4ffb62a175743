#include "prqs/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prqs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;

// Relative weight below which binomial mixture terms are dropped. Eight
// orders below the default quadrature tolerance.
constexpr double kWeightCutoffLog = -41.4465316739601;  // ln(1e-18)

}  // namespace

double ChannelPoint::received_amplitude() const { return std::sqrt(eta) * alpha; }

void ChannelPoint::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::domain_error("ChannelPoint: alpha must be finite and >= 0");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("ChannelPoint: eta must lie in [0,1]");
    if (n_rounds < 1) throw std::domain_error("ChannelPoint: n_rounds must be >= 1");
}

const char* method_name(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::asymptotic: return "asymptotic";
        case Method::infinite_n: return "infinite_n";
    }
    return "unknown";
}

double helstrom_error_prob(double alpha, double eta) {
    ChannelPoint{alpha, eta, 1}.validate();
    // -expm1 keeps 1 - exp(-x) accurate for small exponents
    const double x = 4.0 * (1.0 - eta) * alpha * alpha;
    return 0.5 * (1.0 - std::sqrt(-std::expm1(-x)));
}

double helstrom_error_prob(const ChannelPoint& point) {
    point.validate();
    return helstrom_error_prob(point.alpha, point.eta);
}

double angular_pdf(double theta, double r, std::int64_t n_rounds) {
    if (!std::isfinite(theta) || !std::isfinite(r))
        throw std::domain_error("angular_pdf: non-finite argument");
    if (n_rounds < 1) throw std::domain_error("angular_pdf: n_rounds must be >= 1");

    const double n = static_cast<double>(n_rounds);
    const double kappa = n * r * r;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double w = std::sqrt(n) * r * c;  // signed; sign of r carries through

    if (w >= 0.0) {
        // 1 + erf(w) = 2 - erfc(w), no cancellation on this side
        const double tail = std::exp(-kappa);
        const double peak = kSqrtPi * w * std::exp(-kappa * s * s) * (2.0 - erfc(w));
        return (tail + peak) / (2.0 * kPi);
    }
    // Here 1 + erf(w) = erfc(-w) = exp(-w^2) erfcx(-w); folding exp(-w^2)
    // into exp(-kappa sin^2) yields a single exp(-kappa) factor, so the
    // whole branch underflows gracefully instead of overflowing.
    return std::exp(-kappa) * (1.0 - kSqrtPi * (-w) * erfcx(-w)) / (2.0 * kPi);
}

double mse_alice_exact(double r, std::int64_t n_rounds, const QuadratureSpec& spec) {
    if (!std::isfinite(r)) throw std::domain_error("mse_alice_exact: non-finite amplitude");
    if (n_rounds < 1) throw std::domain_error("mse_alice_exact: n_rounds must be >= 1");
    return integrate_circle(
        [r, n_rounds](double theta) { return theta * theta * angular_pdf(theta, r, n_rounds); },
        spec);
}

double mse_eve_exact(const ChannelPoint& point, const QuadratureSpec& spec) {
    return mse_eve_exact(point, helstrom_error_prob(point), spec);
}

double mse_eve_exact(const ChannelPoint& point, double error_prob, const QuadratureSpec& spec) {
    point.validate();
    if (!(error_prob >= 0.0 && error_prob <= 1.0))
        throw std::domain_error("mse_eve_exact: error_prob outside [0,1]");
    spec.validate();

    const std::int64_t n = point.n_rounds;
    const double r = point.received_amplitude();

    std::vector<double> log_weight(static_cast<std::size_t>(n) + 1);
    double log_max = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k <= n; ++k) {
        log_weight[k] = log_binomial_pmf(static_cast<std::uint64_t>(k),
                                         static_cast<std::uint64_t>(n), error_prob);
        log_max = std::max(log_max, log_weight[k]);
    }

    std::vector<std::int64_t> kept;
    double truncated_mass = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
        if (log_weight[k] - log_max >= kWeightCutoffLog)
            kept.push_back(k);
        else
            truncated_mass += std::exp(log_weight[k]);
    }

    std::vector<double> term(kept.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(kept.size()); ++i) {
        try {
            const std::int64_t k = kept[i];
            const double r_k = r * (1.0 - 2.0 * static_cast<double>(k) / static_cast<double>(n));
            term[i] = std::exp(log_weight[k]) * mse_alice_exact(r_k, n, spec);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    double value = 0.0;
    for (double t : term) value += t;  // fixed k order keeps the sum reproducible

    const double truncation_bound = truncated_mass * kPi * kPi;
    if (truncation_bound > std::max(spec.abs_tol, spec.rel_tol * std::abs(value)))
        throw ConvergenceError("mse_eve_exact: truncated binomial mass exceeds tolerance", value,
                               truncation_bound);
    return value;
}

AnalyticPoint privacy_exact(const ChannelPoint& point, const QuadratureSpec& spec) {
    point.validate();
    const double mse_a = mse_alice_exact(point.received_amplitude(), point.n_rounds, spec);
    const double mse_e = mse_eve_exact(point, spec);
    if (mse_e == 0.0)
        throw std::runtime_error("privacy_exact: mse_eve is exactly zero");
    return {mse_a, mse_e, 1.0 - mse_a / mse_e, Method::exact};
}

double mse_alice_asymptotic(double r, std::int64_t n_rounds) {
    if (!(r > 0.0)) throw std::domain_error("mse_alice_asymptotic: amplitude must be positive");
    if (n_rounds < 1) throw std::domain_error("mse_alice_asymptotic: n_rounds must be >= 1");
    const double nr2 = static_cast<double>(n_rounds) * r * r;
    return 1.0 / (2.0 * nr2) + 1.0 / (4.0 * nr2 * nr2);
}

double mse_eve_asymptotic(double r, double error_prob, std::int64_t n_rounds) {
    if (!(r > 0.0)) throw std::domain_error("mse_eve_asymptotic: amplitude must be positive");
    if (!(error_prob >= 0.0 && error_prob < 0.5))
        throw std::domain_error("mse_eve_asymptotic: error_prob must lie in [0, 1/2)");
    if (n_rounds < 1) throw std::domain_error("mse_eve_asymptotic: n_rounds must be >= 1");

    const double n = static_cast<double>(n_rounds);
    const double contrast = 1.0 - 2.0 * error_prob;
    const double nr2c2 = n * r * r * contrast * contrast;
    const double second = 6.0 * r * r * error_prob * (1.0 - error_prob) + 0.25;
    return 1.0 / (2.0 * nr2c2) + second / (nr2c2 * nr2c2);
}

double privacy_asymptotic(double r, double error_prob, std::int64_t n_rounds) {
    return 1.0 - mse_alice_asymptotic(r, n_rounds) / mse_eve_asymptotic(r, error_prob, n_rounds);
}

bool asymptotic_regime_ok(double r, double error_prob, std::int64_t n_rounds) {
    if (!(r > 0.0) || !(error_prob >= 0.0 && error_prob < 0.5) || n_rounds < 1) return false;
    const double contrast = 1.0 - 2.0 * error_prob;
    return static_cast<double>(n_rounds) * contrast * contrast * r * r >= 1.0;
}

double privacy_infinity(double alpha, double eta) {
    ChannelPoint{alpha, eta, 1}.validate();
    return std::exp(-4.0 * alpha * alpha * (1.0 - eta));
}

double edgeworth_inverse_moment(double mu, double sigma2, std::int64_t n_rounds, int k) {
    if (mu == 0.0) throw std::domain_error("edgeworth_inverse_moment: mu must be nonzero");
    if (!(sigma2 >= 0.0)) throw std::domain_error("edgeworth_inverse_moment: sigma2 must be >= 0");
    if (n_rounds < 1) throw std::domain_error("edgeworth_inverse_moment: n_rounds must be >= 1");
    if (k != 2 && k != 4)
        throw std::invalid_argument("edgeworth_inverse_moment: exponent must be 2 or 4");

    const double n = static_cast<double>(n_rounds);
    const double kk = static_cast<double>(k);
    return std::pow(mu, -kk) * (1.0 + kk * (kk + 1.0) * sigma2 / (2.0 * n * mu * mu));
}

}  // namespace prqs
