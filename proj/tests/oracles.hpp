// Test-only oracles: brute-force and quadrature references kept independent
// of the library's production code paths.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <utility>

#include "orbo/kernels.hpp"
#include "orbo/rng.hpp"
#include "orbo/special.hpp"

namespace oracles {

// Composite Simpson rule; n must be even.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// GP posterior via an explicit dense inverse, Eq.-by-Eq. with no Cholesky.
struct DenseGpOracle {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    orbo::KernelParams kernel;
    double noise_variance = 0.0;
    Eigen::MatrixXd K_inv;

    DenseGpOracle(Eigen::MatrixXd X_, Eigen::VectorXd y_, orbo::KernelParams k_, double noise)
        : X(std::move(X_)), y(std::move(y_)), kernel(std::move(k_)), noise_variance(noise) {
        const Eigen::Index t = X.rows();
        Eigen::MatrixXd K(t, t);
        for (Eigen::Index i = 0; i < t; ++i)
            for (Eigen::Index j = 0; j < t; ++j)
                K(i, j) = orbo::kernel_value(X.row(i).transpose(), X.row(j).transpose(), kernel);
        K += (noise_variance + orbo::jitter_for(kernel))
             * Eigen::MatrixXd::Identity(t, t);
        K_inv = K.inverse();
    }

    std::pair<double, double> predict(const Eigen::VectorXd& x_q) const {
        Eigen::VectorXd k(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            k(i) = orbo::kernel_value(X.row(i).transpose(), x_q, kernel);
        const double mean = k.dot(K_inv * y);
        const double var = kernel.signal_variance - k.dot(K_inv * k);
        return {mean, var};
    }

    double log_marginal() const {
        const Eigen::Index t = X.rows();
        const Eigen::MatrixXd K = K_inv.inverse();
        return -0.5 * y.dot(K_inv * y) - 0.5 * std::log(K.determinant())
               - 0.5 * t * std::log(2.0 * orbo::kPi);
    }
};

// Central finite difference of a scalar function.
inline double fd1(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double fd2(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Marsaglia-Tsang gamma sampler (shape >= 1 here), for Monte Carlo t draws.
inline double sample_gamma(orbo::CounterRng& rng, double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = rng.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// Standard Student-t draw: z / sqrt(chi2_nu / nu).
inline double sample_student_t(orbo::CounterRng& rng, double dof) {
    const double z = rng.normal();
    const double chi2 = 2.0 * sample_gamma(rng, 0.5 * dof);
    return z / std::sqrt(chi2 / dof);
}

}  // namespace oracles
