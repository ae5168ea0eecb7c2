#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace orbo {

enum class KernelFamily { Matern52, RationalQuadratic };

// Stationary ARD kernel: per-dimension lengthscales realize the diagonal
// metric, signal_variance the output amplitude.
struct KernelParams {
    Eigen::VectorXd lengthscales;
    double signal_variance = 1.0;
    KernelFamily family = KernelFamily::Matern52;
    double rq_alpha = 2.0;

    void validate(Eigen::Index dim) const {
        if (lengthscales.size() != dim)
            throw std::invalid_argument("KernelParams: lengthscale count does not match input dimension");
        if ((lengthscales.array() <= 0.0).any())
            throw std::invalid_argument("KernelParams: lengthscales must be strictly positive");
        if (!(signal_variance > 0.0))
            throw std::invalid_argument("KernelParams: signal_variance must be strictly positive");
        if (family == KernelFamily::RationalQuadratic && !(rq_alpha > 0.0))
            throw std::invalid_argument("KernelParams: rq_alpha must be strictly positive");
    }

    static KernelParams isotropic(Eigen::Index dim, double lengthscale,
                                  double signal_variance = 1.0,
                                  KernelFamily family = KernelFamily::Matern52) {
        KernelParams p;
        p.lengthscales = Eigen::VectorXd::Constant(dim, lengthscale);
        p.signal_variance = signal_variance;
        p.family = family;
        return p;
    }
};

// Diagonal-metric distance r = sqrt(sum_j ((x_j - x'_j)/l_j)^2).
template <typename DerivedA, typename DerivedB>
double ard_distance(const Eigen::MatrixBase<DerivedA>& x,
                    const Eigen::MatrixBase<DerivedB>& x_prime,
                    const KernelParams& params) {
    if (x.size() != x_prime.size() || x.size() != params.lengthscales.size())
        throw std::invalid_argument("ard_distance: dimension mismatch");
    return std::sqrt(
        ((x.derived().array() - x_prime.derived().array()) / params.lengthscales.array())
            .square()
            .sum());
}

// Kernel as a function of the ARD distance r.
inline double kernel_of_distance(double r, const KernelParams& params) {
    switch (params.family) {
        case KernelFamily::Matern52:
            return params.signal_variance * (1.0 + r + r * r / 3.0) * std::exp(-r);
        case KernelFamily::RationalQuadratic:
            return params.signal_variance
                   * std::pow(1.0 + r * r / (2.0 * params.rq_alpha), -params.rq_alpha);
    }
    return 0.0;
}

template <typename DerivedA, typename DerivedB>
double kernel_value(const Eigen::MatrixBase<DerivedA>& x,
                    const Eigen::MatrixBase<DerivedB>& x_prime,
                    const KernelParams& params) {
    return kernel_of_distance(ard_distance(x, x_prime, params), params);
}

// Diagonal conditioning floor, scaled with the signal amplitude.
inline double jitter_for(const KernelParams& params) {
    return 1e-8 * params.signal_variance;
}

// k(x_q, X): covariances between one query and the rows of X.
inline Eigen::VectorXd kernel_vector(const Eigen::MatrixXd& X,
                                     const Eigen::VectorXd& x_q,
                                     const KernelParams& params) {
    Eigen::VectorXd k(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        k(i) = kernel_value(X.row(i).transpose(), x_q, params);
    return k;
}

// K_ij = k(x_i, x_j) + delta_ij (noise_variance + jitter); symmetric and,
// after the jitter, positive definite.
inline Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& X, const KernelParams& params,
                                   double noise_variance) {
    params.validate(X.cols());
    const Eigen::Index t = X.rows();
    Eigen::MatrixXd K(t, t);
    for (Eigen::Index i = 0; i < t; ++i) {
        K(i, i) = params.signal_variance + noise_variance + jitter_for(params);
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = kernel_value(X.row(i).transpose(), X.row(j).transpose(), params);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

}  // namespace orbo
