#include "orbo/gp_student_t.hpp"

#include <cmath>
#include <limits>

#include "orbo/design.hpp"
#include "orbo/optim.hpp"
#include "orbo/rng.hpp"

namespace orbo {

namespace {

Eigen::LLT<Eigen::MatrixXd> factor_prior(const Eigen::MatrixXd& X, const KernelParams& kernel) {
    const Eigen::MatrixXd K = gram_matrix(X, kernel, 0.0);
    auto chol = cholesky_with_escalation(K, 10.0 * jitter_for(kernel),
                                         1e-4 * kernel.signal_variance);
    return std::move(chol.llt);
}

Eigen::MatrixXd prior_gram(const Eigen::LLT<Eigen::MatrixXd>& chol) {
    return chol.reconstructedMatrix();
}

}  // namespace

double laplace_log_evidence(const Eigen::MatrixXd& K, const Eigen::LLT<Eigen::MatrixXd>& cholK,
                            const Eigen::VectorXd& y, const StudentTLikelihood& lik,
                            const LaplaceState& state) {
    double loglik = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) loglik += lik.log_pdf(y(i), state.f_hat(i));
    const Eigen::VectorXd alpha = cholK.solve(state.f_hat);
    const Eigen::VectorXd sw = state.w.cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd B = sw.asDiagonal() * K * sw.asDiagonal();
    B.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> cholB(B);
    if (cholB.info() != Eigen::Success)
        throw NumericalError("laplace_log_evidence: determinant factorization failed");
    return loglik - 0.5 * state.f_hat.dot(alpha) - 0.5 * log_det_from_llt(cholB);
}

StudentTGpModel assemble_student_t_model(Eigen::MatrixXd X, const KernelParams& kernel,
                                         Eigen::VectorXd y, const StudentTLikelihood& lik,
                                         LaplaceState state, double log_evidence) {
    StudentTGpModel model;
    model.kernel = kernel;
    model.lik = lik;
    model.X = std::move(X);
    model.y = std::move(y);
    model.chol_prior = factor_prior(model.X, kernel);
    model.alpha = model.chol_prior.solve(state.f_hat);

    // K^{-1} + diag(w) with the exact (possibly negative) Hessian diagonal;
    // PSD at any strict local mode, regularized once if numerically indefinite.
    const Eigen::Index t = model.y.size();
    Eigen::MatrixXd A =
        model.chol_prior.solve(Eigen::MatrixXd::Identity(t, t));
    A += Eigen::MatrixXd(state.w.asDiagonal());
    model.penalized.compute(A);
    if (model.penalized.info() != Eigen::Success) {
        A.diagonal().array() += 1e-8;
        model.penalized.compute(A);
        if (model.penalized.info() != Eigen::Success)
            throw NumericalError("assemble_student_t_model: K^{-1} + W indefinite");
    }

    model.state = std::move(state);
    model.log_evidence = log_evidence;
    return model;
}

StudentTGpModel fit_gp_student_t(const Dataset& data, const KernelParams& kernel_init,
                                 const StudentTLikelihood& lik_init, bool optimize,
                                 const HyperFitOptions& options,
                                 const LaplaceOptions& laplace_options) {
    data.validate();
    if (data.size() < 2) throw InsufficientDataError("fit_gp_student_t: needs at least 2 points");
    if (!data.y.allFinite())
        throw std::invalid_argument("fit_gp_student_t: targets must be finite");
    kernel_init.validate(data.dim());

    const Eigen::MatrixXd& X = data.X;
    const Eigen::VectorXd& y = data.y;

    auto evidence_at = [&](const KernelParams& kernel, const StudentTLikelihood& lik,
                           LaplaceState* state_out) {
        auto chol = factor_prior(X, kernel);
        const Eigen::MatrixXd K = prior_gram(chol);
        LaplaceState state = laplace_mode(K, chol, y, lik, laplace_options);
        if (!state.converged && !state_out)
            throw NumericalError("laplace mode search did not converge");
        const double ev = laplace_log_evidence(K, chol, y, lik, state);
        if (state_out) *state_out = std::move(state);
        return ev;
    };

    KernelParams kernel = kernel_init;
    StudentTLikelihood lik = lik_init;

    if (optimize) {
        const Eigen::Index d = data.dim();
        Eigen::VectorXd lo(d + 2), hi(d + 2);
        for (Eigen::Index j = 0; j < d; ++j) {
            double range = X.col(j).maxCoeff() - X.col(j).minCoeff();
            if (!(range > 1e-12)) range = 1.0;
            lo(j) = std::log(0.01 * range);
            hi(j) = std::log(10.0 * range);
        }
        lo(d) = -6.0;  // log signal variance
        hi(d) = 6.0;
        lo(d + 1) = -6.0;  // log likelihood scale
        hi(d + 1) = 2.0;

        auto clamp = [&](Eigen::VectorXd v) {
            for (Eigen::Index i = 0; i < v.size(); ++i)
                v(i) = std::min(std::max(v(i), lo(i)), hi(i));
            return v;
        };
        auto objective = [&](const Eigen::VectorXd& p) {
            const Eigen::VectorXd q = clamp(p);
            KernelParams k = kernel_init;
            k.lengthscales = q.head(d).array().exp();
            k.signal_variance = std::exp(q(d));
            const StudentTLikelihood l(lik_init.dof, std::exp(q(d + 1)));
            try {
                return -evidence_at(k, l, nullptr);
            } catch (const NumericalError&) {
                return 1e12;
            }
        };

        CounterRng rng(options.seed);
        Eigen::MatrixXd starts =
            latin_hypercube_unit(options.restarts, static_cast<int>(d) + 2, rng);
        const Eigen::VectorXd width = hi - lo;
        Eigen::VectorXd best_p;
        double best_v = std::numeric_limits<double>::infinity();
        for (int s = 0; s < options.restarts; ++s) {
            Eigen::VectorXd p0(d + 2);
            if (s == 0 && options.warm_start) {
                p0.head(d) = kernel_init.lengthscales.array().log();
                p0(d) = std::log(kernel_init.signal_variance);
                p0(d + 1) = std::log(lik_init.scale);
                p0 = clamp(p0);
            } else {
                p0 = lo + width.cwiseProduct(starts.row(s).transpose());
            }
            auto res = nelder_mead_minimize(objective, p0, 0.10 * width, options.max_evals);
            if (res.value < best_v) {
                best_v = res.value;
                best_p = clamp(res.x);
            }
        }
        kernel.lengthscales = best_p.head(d).array().exp();
        kernel.signal_variance = std::exp(best_p(d));
        lik = StudentTLikelihood(lik_init.dof, std::exp(best_p(d + 1)));
    }

    LaplaceState state;
    const double evidence = evidence_at(kernel, lik, &state);
    return assemble_student_t_model(X, kernel, y, lik, std::move(state), evidence);
}

Predictive predict_latent(const StudentTGpModel& model, const Eigen::VectorXd& x_q) {
    const Eigen::VectorXd k = kernel_vector(model.X, x_q, model.kernel);
    const double mean = k.dot(model.alpha);
    const Eigen::VectorXd v = model.chol_prior.solve(k);
    double variance = model.kernel.signal_variance - k.dot(v) + v.dot(model.penalized.solve(v));
    if (variance < 0.0) variance = 0.0;
    return Predictive::gaussian(mean, variance, false);
}

Predictive predict_observation(const StudentTGpModel& model, const Eigen::VectorXd& x_q) {
    const Predictive latent = predict_latent(model, x_q);
    const double scale_sq = latent.variance + model.lik.scale * model.lik.scale;
    return Predictive::student_t_from_scale(latent.mean, scale_sq, model.lik.dof, true);
}

}  // namespace orbo
