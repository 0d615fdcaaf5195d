#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace treepca {

/// Ordinary least squares fit of y on x with the two-sided slope test.
struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double p_value = 1.0;
    int df = 0; // sample size - 2
};

namespace detail {

/// Continued fraction for the regularized incomplete beta (Lentz's method).
inline double beta_cont_frac(double a, double b, double x) {
    constexpr double eps = 1e-12;
    constexpr double fpmin = 1e-300;
    constexpr int max_iter = 500;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw std::runtime_error("incomplete beta did not converge");
}

} // namespace detail

/// Regularized incomplete beta I_x(a, b), absolute accuracy about 1e-10.
inline double regularized_incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double log_prefix = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                        a * std::log(x) + b * std::log1p(-x);
    double prefix = std::exp(log_prefix);
    if (x < (a + 1.0) / (a + b + 2.0)) return prefix * detail::beta_cont_frac(a, b, x) / a;
    return 1.0 - prefix * detail::beta_cont_frac(b, a, 1.0 - x) / b;
}

/// Two-sided p-value of a Student-t statistic with `df` degrees of freedom,
/// P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2). No normal approximation.
inline double student_t_two_sided_p(double t, int df) {
    if (df < 1) throw std::invalid_argument("t distribution needs df >= 1");
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

/// OLS slope, intercept, and two-sided p-value for the null hypothesis of
/// zero slope. Requires at least 3 points and a non-constant regressor. A
/// perfect nonconstant fit reports p = 0; a constant response reports slope
/// 0 and p = 1.
inline RegressionResult ols_slope_pvalue(const std::vector<double>& x,
                                         const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("regression inputs differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("regression needs at least 3 points");

    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
    }
    if (sxx == 0.0) throw std::invalid_argument("degenerate regressor");

    RegressionResult out;
    out.df = static_cast<int>(n) - 2;
    out.slope = sxy / sxx;
    out.intercept = mean_y - out.slope * mean_x;

    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (out.intercept + out.slope * x[i]);
        ssr += r * r;
    }
    if (ssr <= 0.0) {
        out.p_value = out.slope == 0.0 ? 1.0 : 0.0;
        return out;
    }
    double se = std::sqrt(ssr / out.df / sxx);
    double t = out.slope / se;
    out.p_value = std::min(1.0, std::max(0.0, student_t_two_sided_p(t, out.df)));
    return out;
}

} // namespace treepca
