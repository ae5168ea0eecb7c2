#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "orbo/dataset.hpp"
#include "orbo/kernels.hpp"
#include "orbo/predictive.hpp"

namespace orbo {

// Multi-start derivative-free search over log-space hyperparameters.
struct HyperFitOptions {
    int restarts = 5;
    int max_evals = 200;
    bool warm_start = false;  // use the supplied init as the first start
    std::uint64_t seed = 0;   // start-point stream
};

// Exact GP with Gaussian likelihood; zero prior mean, targets unstandardized.
struct GaussianGpModel {
    KernelParams kernel;
    double noise_variance = 0.0;
    Eigen::MatrixXd X;  // masked training inputs
    Eigen::VectorXd y;  // masked training targets
    Eigen::LLT<Eigen::MatrixXd> chol;  // K = gram + noise + jitter
    Eigen::VectorXd alpha;             // K^{-1} y
    double extra_jitter = 0.0;         // escalation applied beyond the base jitter
    double log_evidence = 0.0;

    Eigen::Index size() const { return y.size(); }
};

// Log marginal likelihood -1/2 y'K^{-1}y - 1/2 log|K| - t/2 log 2pi at the
// given hyperparameters, on the masked rows of data.
double log_marginal_likelihood(const Dataset& data, const KernelParams& kernel,
                               double noise_variance);

// Fit on the masked rows. optimize=true maximizes the marginal likelihood
// over (log lengthscales, log signal variance, log noise variance) and needs
// at least two inliers; optimize=false factors at the given hyperparameters.
GaussianGpModel fit_gp_gaussian(const Dataset& data, const KernelParams& kernel_init,
                                double noise_init, bool optimize,
                                const HyperFitOptions& options = {});

// Posterior predictive at x_q; with_noise adds the observation noise.
Predictive predict_gaussian(const GaussianGpModel& model, const Eigen::VectorXd& x_q,
                            bool with_noise);

}  // namespace orbo
