#include "prqs/numerics.hpp"

#include <array>
#include <cmath>

namespace prqs {

namespace {

// Rational Chebyshev approximations for erf/erfc/erfcx after W. J. Cody
// (Math. Comp. 23, 1969; netlib specfun CALERF), restated in plain C++.
// jint selects the entry point: 0 = erf, 1 = erfc, 2 = erfcx.
double calerf(double x, int jint) {
    static constexpr double coef_a[5] = {3.1611237438705656, 113.864154151050156,
                                         377.485237685302021, 3209.37758913846947,
                                         0.185777706184603153};
    static constexpr double coef_b[4] = {23.6012909523441209, 244.024637934444173,
                                         1282.61652607737228, 2844.23683343917062};
    static constexpr double coef_c[9] = {0.564188496988670089, 8.88314979438837594,
                                         66.1191906371416295,  298.635138197400131,
                                         881.95222124176909,   1712.04761263407058,
                                         2051.07837782607147,  1230.33935479799725,
                                         2.15311535474403846e-8};
    static constexpr double coef_d[8] = {15.7449261107098347, 117.693950891312499,
                                         537.181101862009858, 1621.38957456669019,
                                         3290.79923573345963, 4362.61909014324716,
                                         3439.36767414372164, 1230.33935480374942};
    static constexpr double coef_p[6] = {0.305326634961232344, 0.360344899949804439,
                                         0.125781726111229246, 0.0160837851487422766,
                                         6.58749161529837803e-4, 0.0163153871373020978};
    static constexpr double coef_q[5] = {2.56852019228982242,  1.87295284992346047,
                                         0.527905102951428412, 0.0605183413124413191,
                                         0.00233520497626869185};

    constexpr double sqrpi = 0.56418958354775628695;  // 1/sqrt(pi)
    constexpr double thresh = 0.46875;
    constexpr double xinf = 1.79e308;
    constexpr double xneg = -26.628;
    constexpr double xsmall = 1.11e-16;
    constexpr double xbig = 26.543;
    constexpr double xhuge = 6.71e7;
    constexpr double xmax = 2.53e307;

    const double y = std::abs(x);
    double result;

    if (y <= thresh) {
        // erf on the central interval
        double ysq = (y > xsmall) ? y * y : 0.0;
        double xnum = coef_a[4] * ysq;
        double xden = ysq;
        for (int i = 0; i < 3; ++i) {
            xnum = (xnum + coef_a[i]) * ysq;
            xden = (xden + coef_b[i]) * ysq;
        }
        result = x * (xnum + coef_a[3]) / (xden + coef_b[3]);
        if (jint != 0) result = 1.0 - result;
        if (jint == 2) result = std::exp(ysq) * result;
        return result;
    }

    if (y <= 4.0) {
        // erfc on [0.46875, 4]
        double xnum = coef_c[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + coef_c[i]) * y;
            xden = (xden + coef_d[i]) * y;
        }
        result = (xnum + coef_c[7]) / (xden + coef_d[7]);
        if (jint != 2) {
            const double ysq = std::trunc(y * 16.0) / 16.0;
            const double del = (y - ysq) * (y + ysq);
            result *= std::exp(-ysq * ysq) * std::exp(-del);
        }
    } else {
        // erfc beyond 4, via the asymptotic rational form in 1/y^2
        result = 0.0;
        bool skip_rational = false;
        if (y >= xbig) {
            if (jint != 2 || y >= xmax) {
                skip_rational = true;
            } else if (y >= xhuge) {
                result = sqrpi / y;
                skip_rational = true;
            }
        }
        if (!skip_rational) {
            const double ysq = 1.0 / (y * y);
            double xnum = coef_p[5] * ysq;
            double xden = ysq;
            for (int i = 0; i < 4; ++i) {
                xnum = (xnum + coef_p[i]) * ysq;
                xden = (xden + coef_q[i]) * ysq;
            }
            result = ysq * (xnum + coef_p[4]) / (xden + coef_q[4]);
            result = (sqrpi - result) / y;
            if (jint != 2) {
                const double ysq16 = std::trunc(y * 16.0) / 16.0;
                const double del = (y - ysq16) * (y + ysq16);
                result *= std::exp(-ysq16 * ysq16) * std::exp(-del);
            }
        }
    }

    // fix-ups for negative arguments and the three entry points
    if (jint == 0) {
        result = (0.5 - result) + 0.5;
        if (x < 0.0) result = -result;
    } else if (jint == 1) {
        if (x < 0.0) result = 2.0 - result;
    } else {
        if (x < 0.0) {
            if (x < xneg) {
                result = xinf;
            } else {
                const double ysq16 = std::trunc(x * 16.0) / 16.0;
                const double del = (x - ysq16) * (x + ysq16);
                const double expx2 = std::exp(ysq16 * ysq16) * std::exp(del);
                result = (expx2 + expx2) - result;
            }
        }
    }
    return result;
}

void require_finite(double x, const char* fn) {
    if (!std::isfinite(x)) throw std::domain_error(std::string(fn) + ": non-finite argument");
}

// ln(n!) - ln( sqrt(2 pi n) (n/e)^n ): exact small-n table, Stirling series
// beyond. Full double accuracy, unlike lgamma differences which lose ~1e-11
// absolute around n ~ 1e4.
double stirlerr(double n) {
    static const auto small = [] {
        std::array<double, 16> t{};
        long double log_fact = 0.0L;
        for (int i = 1; i <= 15; ++i) {
            log_fact += std::log(static_cast<long double>(i));
            const long double ln_sqrt = 0.5L * std::log(2.0L * 3.14159265358979323846264338L * i);
            t[static_cast<std::size_t>(i)] =
                static_cast<double>(log_fact - ln_sqrt - i * (std::log(static_cast<long double>(i)) - 1.0L));
        }
        return t;
    }();
    if (n <= 15.0) return small[static_cast<std::size_t>(n)];
    constexpr double s0 = 1.0 / 12.0, s1 = 1.0 / 360.0, s2 = 1.0 / 1260.0, s3 = 1.0 / 1680.0,
                     s4 = 1.0 / 1188.0;
    const double nn = n * n;
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// Binomial deviance x ln(x/m) + m - x, evaluated by series when x ~ m.
double bd0(double x, double m) {
    if (std::abs(x - m) < 0.1 * (x + m)) {
        double v = (x - m) / (x + m);
        double s = (x - m) * v;
        double term = 2.0 * x * v;
        v *= v;
        for (int j = 1;; ++j) {
            term *= v;
            const double s_next = s + term / (2 * j + 1);
            if (s_next == s) return s_next;
            s = s_next;
        }
    }
    return x * std::log(x / m) + m - x;
}

}  // namespace

double erf(double x) {
    require_finite(x, "erf");
    return calerf(x, 0);
}

double erfc(double x) {
    require_finite(x, "erfc");
    return calerf(x, 1);
}

double erfcx(double x) {
    require_finite(x, "erfcx");
    if (x < -26.628)
        throw std::range_error("erfcx: argument below -26.628 overflows double range");
    return calerf(x, 2);
}

double log_binomial_pmf(std::uint64_t k, std::uint64_t n, double p) {
    if (k > n) throw std::domain_error("log_binomial_pmf: k > n");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("log_binomial_pmf: p outside [0,1]");

    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (p == 0.0) return (k == 0) ? 0.0 : neg_inf;
    if (p == 1.0) return (k == n) ? 0.0 : neg_inf;

    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    if (k == 0) return nd * std::log1p(-p);
    if (k == n) return nd * std::log(p);

    // saddle-point form (Loader): exact for the dominant weights
    const double lc = stirlerr(nd) - stirlerr(kd) - stirlerr(nd - kd) - bd0(kd, nd * p) -
                      bd0(nd - kd, nd * (1.0 - p));
    const double lf = std::log(2.0 * std::numbers::pi) + std::log(kd) + std::log1p(-kd / nd);
    return lc - 0.5 * lf;
}

double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0))
        throw std::domain_error("normal_quantile: probability must lie in (0,1)");

    // Acklam's rational approximation, then one Halley step through erfc.
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (prob < p_low) {
        const double q = std::sqrt(-2.0 * std::log(prob));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (prob <= 1.0 - p_low) {
        const double q = prob - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-prob));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double err = 0.5 * erfc(-x / std::numbers::sqrt2) - prob;
    const double u = err * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace prqs
