#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace orbo {

inline constexpr double kPi = 3.14159265358979323846;

inline double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
}

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double incbeta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double incbeta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incbeta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * detail::incbeta_cf(a, b, x) / a;
    }
    const double front_sym = std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a));
    return 1.0 - front_sym * detail::incbeta_cf(b, a, 1.0 - x) / b;
}

// Standard Student-t density, z standardized, dof > 0.
inline double student_t_log_pdf(double z, double dof) {
    return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof)
           - 0.5 * std::log(dof * kPi)
           - 0.5 * (dof + 1.0) * std::log1p(z * z / dof);
}

inline double student_t_pdf(double z, double dof) {
    return std::exp(student_t_log_pdf(z, dof));
}

inline double student_t_cdf(double z, double dof) {
    if (std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
    if (z == 0.0) return 0.5;
    const double x = dof / (dof + z * z);
    const double p = 0.5 * incbeta(0.5 * dof, 0.5, x);
    return z > 0.0 ? 1.0 - p : p;
}

// Quantile by bisection on the cdf; symmetric around 0.5.
inline double student_t_quantile(double p, double dof) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("student_t_quantile: p must be in (0,1)");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -student_t_quantile(1.0 - p, dof);
    double lo = 0.0;
    double hi = 1.0;
    while (student_t_cdf(hi, dof) < p) {
        hi *= 2.0;
        if (hi > 1e300) break;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, dof) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace orbo
