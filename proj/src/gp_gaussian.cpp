#include "orbo/gp_gaussian.hpp"

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

struct FactoredGram {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double extra_jitter = 0.0;
};

FactoredGram factor_gram(const Eigen::MatrixXd& X, const KernelParams& kernel,
                         double noise_variance) {
    const Eigen::MatrixXd K = gram_matrix(X, kernel, noise_variance);
    const double base = jitter_for(kernel);
    auto chol = cholesky_with_escalation(K, 10.0 * base, 1e-4 * kernel.signal_variance);
    return FactoredGram{std::move(chol.llt), chol.jitter};
}

double lml_from_factor(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& alpha) {
    const double t = static_cast<double>(y.size());
    return -0.5 * y.dot(alpha) - 0.5 * log_det_from_llt(llt) - 0.5 * t * kLog2Pi;
}

// Search box over [log l_1..log l_d, log sigma_s^2, log sigma_n^2].
struct HyperBox {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
};

HyperBox gaussian_hyper_box(const Eigen::MatrixXd& X) {
    const Eigen::Index d = X.cols();
    HyperBox box;
    box.lo.resize(d + 2);
    box.hi.resize(d + 2);
    for (Eigen::Index j = 0; j < d; ++j) {
        double range = X.col(j).maxCoeff() - X.col(j).minCoeff();
        if (!(range > 1e-12)) range = 1.0;
        box.lo(j) = std::log(0.01 * range);
        box.hi(j) = std::log(10.0 * range);
    }
    box.lo(d) = -6.0;  // log signal variance
    box.hi(d) = 6.0;
    box.lo(d + 1) = -12.0;  // log noise variance
    box.hi(d + 1) = 2.0;
    return box;
}

Eigen::VectorXd clamp_to_box(Eigen::VectorXd v, const HyperBox& box) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = std::min(std::max(v(i), box.lo(i)), box.hi(i));
    return v;
}

KernelParams unpack_kernel(const Eigen::VectorXd& p, const KernelParams& proto) {
    const Eigen::Index d = p.size() - 2;
    KernelParams k = proto;
    k.lengthscales = p.head(d).array().exp();
    k.signal_variance = std::exp(p(d));
    return k;
}

}  // namespace

double log_marginal_likelihood(const Dataset& data, const KernelParams& kernel,
                               double noise_variance) {
    const Dataset view = data.masked();
    if (view.size() < 1) throw InsufficientDataError("log_marginal_likelihood: no inliers");
    kernel.validate(view.dim());
    auto fac = factor_gram(view.X, kernel, noise_variance);
    const Eigen::VectorXd alpha = fac.llt.solve(view.y);
    return lml_from_factor(fac.llt, view.y, alpha);
}

GaussianGpModel fit_gp_gaussian(const Dataset& data, const KernelParams& kernel_init,
                                double noise_init, bool optimize,
                                const HyperFitOptions& options) {
    const Dataset view = data.masked();
    if (view.size() < 1) throw InsufficientDataError("fit_gp_gaussian: no inliers");
    if (optimize && view.size() < 2)
        throw InsufficientDataError("fit_gp_gaussian: optimization needs at least 2 inliers");
    if (!view.y.allFinite()) throw std::invalid_argument("fit_gp_gaussian: targets must be finite");
    kernel_init.validate(view.dim());

    KernelParams kernel = kernel_init;
    double noise = noise_init;

    if (optimize) {
        const Eigen::Index d = view.dim();
        const HyperBox box = gaussian_hyper_box(view.X);
        auto objective = [&](const Eigen::VectorXd& p) {
            const Eigen::VectorXd q = clamp_to_box(p, box);
            const KernelParams k = unpack_kernel(q, kernel_init);
            const double sn2 = std::exp(q(d + 1));
            try {
                return -log_marginal_likelihood(view, k, sn2);
            } catch (const NumericalError&) {
                return 1e12;
            }
        };

        CounterRng rng(options.seed);
        Eigen::MatrixXd starts =
            latin_hypercube_unit(options.restarts, static_cast<int>(d) + 2, rng);
        Eigen::VectorXd width = box.hi - box.lo;
        Eigen::VectorXd best_p;
        double best_v = std::numeric_limits<double>::infinity();
        for (int s = 0; s < options.restarts; ++s) {
            Eigen::VectorXd p0(d + 2);
            if (s == 0 && options.warm_start) {
                p0.head(d) = kernel_init.lengthscales.array().log();
                p0(d) = std::log(kernel_init.signal_variance);
                p0(d + 1) = std::log(std::max(noise_init, 1e-300));
                p0 = clamp_to_box(p0, box);
            } else {
                p0 = box.lo + width.cwiseProduct(starts.row(s).transpose());
            }
            auto res = nelder_mead_minimize(objective, p0, 0.10 * width, options.max_evals);
            if (res.value < best_v) {
                best_v = res.value;
                best_p = clamp_to_box(res.x, box);
            }
        }
        kernel = unpack_kernel(best_p, kernel_init);
        noise = std::exp(best_p(d + 1));
    }

    GaussianGpModel model;
    model.kernel = kernel;
    model.noise_variance = noise;
    model.X = view.X;
    model.y = view.y;
    auto fac = factor_gram(model.X, model.kernel, model.noise_variance);
    model.chol = std::move(fac.llt);
    model.extra_jitter = fac.extra_jitter;
    model.alpha = model.chol.solve(model.y);
    model.log_evidence = lml_from_factor(model.chol, model.y, model.alpha);
    return model;
}

Predictive predict_gaussian(const GaussianGpModel& model, const Eigen::VectorXd& x_q,
                            bool with_noise) {
    const Eigen::VectorXd k = kernel_vector(model.X, x_q, model.kernel);
    const double mean = k.dot(model.alpha);
    const Eigen::VectorXd v = model.chol.matrixL().solve(k);
    double variance = model.kernel.signal_variance - v.squaredNorm();
    if (variance < 0.0) variance = 0.0;
    if (with_noise) variance += model.noise_variance;
    return Predictive::gaussian(mean, variance, with_noise);
}

}  // namespace orbo
