#pragma once

// Scalar numerical primitives shared by the analytic and estimator layers:
// Cody-style error functions (including the scaled complement, which stays
// finite where exp(x^2)*erfc(x) would overflow), log-space binomial weights,
// and an adaptive Gauss-Kronrod quadrature over the circle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace prqs {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_subdivisions < 1)
            throw std::invalid_argument("QuadratureSpec: rel_tol > 0, abs_tol >= 0, max_subdivisions >= 1 required");
    }
};

// Raised when the adaptive scheme runs out of subdivisions; carries the best
// estimate so callers can decide whether the residual bound is acceptable.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const { return best_estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

double erf(double x);
double erfc(double x);

// exp(x^2) * erfc(x), defined down to x ~ -26.6 (below that the true value
// overflows a double and a std::range_error is thrown).
double erfcx(double x);

// ln[ C(n,k) p^k (1-p)^(n-k) ], with exact -inf at the p in {0,1} boundaries.
double log_binomial_pmf(std::uint64_t k, std::uint64_t n, double p);

// Inverse standard-normal CDF, accurate to ~1e-15 (rational approximation
// plus one Halley refinement through erfc).
double normal_quantile(double prob);

// Map any finite angle to (-pi, pi].
inline double wrap_angle(double x) {
    double y = std::remainder(x, 2.0 * std::numbers::pi);
    if (y <= -std::numbers::pi) y += 2.0 * std::numbers::pi;
    return y;
}

namespace detail {

// 15-point Kronrod / 7-point Gauss pair on [a, b]; nodes and weights from
// the classic QUADPACK tables.
struct PanelEstimate {
    double value;
    double abs_error;
};

template <typename F>
PanelEstimate gk15(F&& f, double a, double b) {
    static constexpr double xgk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);

    double resg = fc * wg[3];
    double resk = fc * wgk[7];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double fsum = fv1[j] + fv2[j];
        if (j % 2 == 1) resg += wg[j / 2] * fsum;
        resk += wgk[j] * fsum;
        resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    }
    const double mean = resk * 0.5;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    resasc *= std::abs(half);
    resabs *= std::abs(half);

    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double epmach = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * epmach)) err = std::max(epmach * 50.0 * resabs, err);

    return {resk * half, err};
}

struct AdaptivePanel {
    double a, b, value, error;
    bool operator<(const AdaptivePanel& o) const { return error < o.error; }
};

}  // namespace detail

// Adaptive integral of f over (-pi, pi]. The initial grid splits at 0 and
// +-pi/2 and carries a geometric ladder toward 0 and +-pi, so that integrands
// concentrated near those angles (widths down to ~1e-4 rad) are seen by the
// first pass instead of slipping between quadrature nodes.
template <typename F>
double integrate_circle(F&& f, const QuadratureSpec& spec = {}) {
    spec.validate();

    static const std::vector<double> breaks = [] {
        constexpr double pi = std::numbers::pi;
        std::vector<double> b;
        b.push_back(-pi);
        for (double s : {1e-1, 1e-2, 1e-3, 1e-4}) b.push_back(-pi + s);
        b.push_back(-pi / 2.0);
        for (double s : {1e-1, 1e-2, 1e-3, 1e-4}) b.push_back(-s);
        b.push_back(0.0);
        for (double s : {1e-4, 1e-3, 1e-2, 1e-1}) b.push_back(s);
        b.push_back(pi / 2.0);
        for (double s : {1e-1, 1e-2, 1e-3, 1e-4}) b.push_back(pi - s);
        b.push_back(pi);
        std::sort(b.begin(), b.end());
        return b;
    }();

    std::priority_queue<detail::AdaptivePanel> panels;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        auto est = detail::gk15(f, breaks[i], breaks[i + 1]);
        panels.push({breaks[i], breaks[i + 1], est.value, est.abs_error});
        total += est.value;
        total_err += est.abs_error;
    }

    int subdivisions = 0;
    auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
    while (total_err > tolerance()) {
        if (subdivisions >= spec.max_subdivisions)
            throw ConvergenceError("integrate_circle: tolerance not reached after " +
                                       std::to_string(subdivisions) + " subdivisions",
                                   total, total_err);
        detail::AdaptivePanel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.abs_error + right.abs_error - worst.error;
        panels.push({worst.a, mid, left.value, left.abs_error});
        panels.push({mid, worst.b, right.value, right.abs_error});
        ++subdivisions;
    }
    return total;
}

}  // namespace prqs
