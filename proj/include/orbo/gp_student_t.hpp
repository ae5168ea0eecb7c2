#pragma once

#include <Eigen/Dense>
#include <vector>

#include "orbo/dataset.hpp"
#include "orbo/gp_gaussian.hpp"
#include "orbo/kernels.hpp"
#include "orbo/likelihoods.hpp"
#include "orbo/linalg.hpp"
#include "orbo/predictive.hpp"

namespace orbo {

struct LaplaceOptions {
    int max_iterations = 100;
    double tolerance = 1e-6;  // inf-norm of the stationarity residual
};

struct LaplaceState {
    Eigen::VectorXd f_hat;  // mode of the latent conditional posterior
    Eigen::VectorXd w;      // exact negative log-likelihood Hessian diagonal at the mode
    bool converged = false;
    int iterations = 0;
    std::vector<double> objective_trace;  // accepted log conditional posterior values
};

// Damped Newton search for the mode of log p(y|f) - 1/2 f'K^{-1}f. The
// Newton system floors negative Hessian entries at zero; the gradient and
// line search use the exact objective, so accepted steps never decrease it.
template <class Likelihood>
LaplaceState laplace_mode(const Eigen::MatrixXd& K, const Eigen::LLT<Eigen::MatrixXd>& cholK,
                          const Eigen::VectorXd& y, const Likelihood& lik,
                          const LaplaceOptions& opt = {}) {
    const Eigen::Index t = y.size();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(t);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(t);  // K^{-1} f

    auto log_lik = [&](const Eigen::VectorXd& fv) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < t; ++i) s += lik.log_pdf(y(i), fv(i));
        return s;
    };

    LaplaceState state;
    state.f_hat = f;
    state.w.resize(t);

    double psi = log_lik(f);
    state.objective_trace.push_back(psi);

    Eigen::VectorXd grad(t), w_exact(t);
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        for (Eigen::Index i = 0; i < t; ++i) {
            auto [g, h] = lik.dlog_pdf(y(i), f(i));
            grad(i) = g;
            w_exact(i) = -h;
        }
        if ((grad - a).lpNorm<Eigen::Infinity>() <= opt.tolerance) {
            state.converged = true;
            break;
        }

        const Eigen::VectorXd w_pos = w_exact.cwiseMax(0.0);
        const Eigen::VectorXd sw = w_pos.cwiseSqrt();
        Eigen::MatrixXd B = sw.asDiagonal() * K * sw.asDiagonal();
        B.diagonal().array() += 1.0;
        Eigen::LLT<Eigen::MatrixXd> cholB(B);
        if (cholB.info() != Eigen::Success)
            throw NumericalError("laplace_mode: inner system factorization failed");

        const Eigen::VectorXd b = w_pos.cwiseProduct(f) + grad;
        const Eigen::VectorXd Kb = K * b;
        const Eigen::VectorXd a_newton = b - sw.cwiseProduct(cholB.solve(sw.cwiseProduct(Kb)));
        const Eigen::VectorXd f_newton = K * a_newton;

        const Eigen::VectorXd df = f_newton - f;
        const Eigen::VectorXd da = a_newton - a;
        double step = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            const Eigen::VectorXd f_try = f + step * df;
            const Eigen::VectorXd a_try = a + step * da;
            const double psi_try = log_lik(f_try) - 0.5 * a_try.dot(f_try);
            if (psi_try >= psi - 1e-12 * (1.0 + std::fabs(psi))) {
                f = f_try;
                a = a_try;
                psi = psi_try;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++state.iterations;
        state.objective_trace.push_back(psi);
        if (!accepted) break;  // no ascent direction left at this scale
    }

    if (!state.converged) {
        for (Eigen::Index i = 0; i < t; ++i) {
            auto [g, h] = lik.dlog_pdf(y(i), f(i));
            grad(i) = g;
            w_exact(i) = -h;
        }
        state.converged = (grad - a).lpNorm<Eigen::Infinity>() <= opt.tolerance;
    }
    state.f_hat = f;
    for (Eigen::Index i = 0; i < t; ++i) state.w(i) = -lik.dlog_pdf(y(i), f(i)).second;
    (void)cholK;
    return state;
}

// GP with Student-t likelihood, posterior approximated at the Laplace mode.
// Fit on all points, unmasked; the prior Gram carries no noise term (jitter
// only), observation noise lives in the likelihood.
struct StudentTGpModel {
    KernelParams kernel;
    StudentTLikelihood lik;
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    Eigen::LLT<Eigen::MatrixXd> chol_prior;   // K
    Eigen::VectorXd alpha;                    // K^{-1} f_hat
    Eigen::LLT<Eigen::MatrixXd> penalized;    // K^{-1} + diag(w), regularized if indefinite
    LaplaceState state;
    double log_evidence = 0.0;  // Laplace evidence with the floored Hessian

    Eigen::Index size() const { return y.size(); }
};

// Build the prediction-ready model from a computed mode; exposed so the
// Laplace path can be exercised with other likelihoods.
StudentTGpModel assemble_student_t_model(Eigen::MatrixXd X, const KernelParams& kernel,
                                         Eigen::VectorXd y, const StudentTLikelihood& lik,
                                         LaplaceState state, double log_evidence);

// Laplace evidence log q(y) = log p(y|f^) - 1/2 f^'K^{-1}f^ - 1/2 log|I + K W+|.
double laplace_log_evidence(const Eigen::MatrixXd& K, const Eigen::LLT<Eigen::MatrixXd>& cholK,
                            const Eigen::VectorXd& y, const StudentTLikelihood& lik,
                            const LaplaceState& state);

// optimize=true tunes (log lengthscales, log signal variance, log scale) by
// the Laplace evidence; dof stays fixed.
StudentTGpModel fit_gp_student_t(const Dataset& data, const KernelParams& kernel_init,
                                 const StudentTLikelihood& lik_init, bool optimize,
                                 const HyperFitOptions& options = {},
                                 const LaplaceOptions& laplace_options = {});

// Latent posterior at x_q: mean k'K^{-1}f^, variance k(x,x) - k'(K+W^{-1})^{-1}k.
Predictive predict_latent(const StudentTGpModel& model, const Eigen::VectorXd& x_q);

// Observation-level diagnostic predictive: Student-t with location the latent
// mean, squared scale latent variance + sigma_0^2, dof from the likelihood.
Predictive predict_observation(const StudentTGpModel& model, const Eigen::VectorXd& x_q);

}  // namespace orbo
