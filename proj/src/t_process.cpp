#include "orbo/t_process.hpp"

#include <cmath>
#include <limits>

#include "orbo/common.hpp"
#include "orbo/design.hpp"
#include "orbo/linalg.hpp"
#include "orbo/optim.hpp"
#include "orbo/rng.hpp"

namespace orbo {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

Eigen::LLT<Eigen::MatrixXd> factor_bracket(const Eigen::MatrixXd& X,
                                           const TProcessParams& params) {
    const Eigen::MatrixXd K = gram_matrix(X, params.kernel, params.relative_noise);
    auto chol = cholesky_with_escalation(K, 10.0 * jitter_for(params.kernel),
                                         1e-4 * params.kernel.signal_variance);
    return std::move(chol.llt);
}

double log_density_from_factor(const Eigen::LLT<Eigen::MatrixXd>& chol,
                               const Eigen::VectorXd& y, const TProcessParams& params,
                               double* quadratic_out) {
    const double n = static_cast<double>(y.size());
    const double a = params.ig_shape;
    const double b = params.ig_rate;
    const double quad = y.dot(chol.solve(y));
    if (quadratic_out) *quadratic_out = quad;
    return std::lgamma(a + 0.5 * n) - std::lgamma(a) - 0.5 * n * (kLog2Pi + std::log(b))
           - 0.5 * log_det_from_llt(chol) - (a + 0.5 * n) * std::log1p(quad / (2.0 * b));
}

}  // namespace

double mvt_log_density(const Eigen::VectorXd& y, const TProcessParams& params,
                       const Eigen::MatrixXd& X) {
    if (y.size() != X.rows()) throw std::invalid_argument("mvt_log_density: size mismatch");
    params.validate(X.cols());
    auto chol = factor_bracket(X, params);
    return log_density_from_factor(chol, y, params, nullptr);
}

TProcessModel fit_tprocess(const Dataset& data, const TProcessParams& init, bool optimize,
                           const HyperFitOptions& options) {
    data.validate();
    if (data.size() < 2) throw InsufficientDataError("fit_tprocess: needs at least 2 points");
    if (!data.y.allFinite()) throw std::invalid_argument("fit_tprocess: targets must be finite");
    init.validate(data.dim());

    TProcessParams params = init;
    if (optimize) {
        const Eigen::Index d = data.dim();
        Eigen::VectorXd lo(d + 1), hi(d + 1);
        for (Eigen::Index j = 0; j < d; ++j) {
            double range = data.X.col(j).maxCoeff() - data.X.col(j).minCoeff();
            if (!(range > 1e-12)) range = 1.0;
            lo(j) = std::log(0.01 * range);
            hi(j) = std::log(10.0 * range);
        }
        lo(d) = -12.0;  // log relative noise
        hi(d) = 2.0;

        auto clamp = [&](Eigen::VectorXd v) {
            for (Eigen::Index i = 0; i < v.size(); ++i)
                v(i) = std::min(std::max(v(i), lo(i)), hi(i));
            return v;
        };
        auto objective = [&](const Eigen::VectorXd& p) {
            const Eigen::VectorXd q = clamp(p);
            TProcessParams trial = init;
            trial.kernel.lengthscales = q.head(d).array().exp();
            trial.relative_noise = std::exp(q(d));
            try {
                return -mvt_log_density(data.y, trial, data.X);
            } catch (const NumericalError&) {
                return 1e12;
            }
        };

        CounterRng rng(options.seed);
        Eigen::MatrixXd starts =
            latin_hypercube_unit(options.restarts, static_cast<int>(d) + 1, rng);
        const Eigen::VectorXd width = hi - lo;
        Eigen::VectorXd best_p;
        double best_v = std::numeric_limits<double>::infinity();
        for (int s = 0; s < options.restarts; ++s) {
            Eigen::VectorXd p0(d + 1);
            if (s == 0 && options.warm_start) {
                p0.head(d) = init.kernel.lengthscales.array().log();
                p0(d) = std::log(std::max(init.relative_noise, 1e-300));
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
        params.kernel.lengthscales = best_p.head(d).array().exp();
        params.relative_noise = std::exp(best_p(d));
    }

    TProcessModel model;
    model.params = params;
    model.X = data.X;
    model.y = data.y;
    model.chol = factor_bracket(model.X, params);
    model.alpha = model.chol.solve(model.y);
    model.log_evidence = log_density_from_factor(model.chol, model.y, params, &model.quadratic);
    return model;
}

Predictive predict_tprocess(const TProcessModel& model, const Eigen::VectorXd& x_q) {
    const TProcessParams& p = model.params;
    const Eigen::VectorXd k = kernel_vector(model.X, x_q, p.kernel);
    const double location = k.dot(model.alpha);
    const Eigen::VectorXd v = model.chol.matrixL().solve(k);
    double resid = p.kernel.signal_variance + p.relative_noise - v.squaredNorm();
    if (resid < 0.0) resid = 0.0;
    const double t = static_cast<double>(model.size());
    const double dof = 2.0 * p.ig_shape + t;
    const double variance =
        (2.0 * p.ig_rate + model.quadratic) / (2.0 * p.ig_shape + t - 2.0) * resid;
    return Predictive::student_t_from_variance(location, variance, dof, true);
}

}  // namespace orbo
