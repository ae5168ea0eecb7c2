#include "orbo/bo.hpp"

#include <chrono>
#include <cmath>
#include <memory>

#include "orbo/common.hpp"
#include "orbo/design.hpp"
#include "orbo/gp_student_t.hpp"
#include "orbo/rng.hpp"
#include "orbo/t_process.hpp"

namespace orbo {

namespace {

// Stream tags for deriving per-purpose seeds from the run seed.
constexpr std::uint64_t kInitStream = 0x696e6974ULL;
constexpr std::uint64_t kAcqStream = 0x61637175ULL;
constexpr std::uint64_t kHypGaussStream = 0x68796767ULL;
constexpr std::uint64_t kHypRobustStream = 0x68797274ULL;

std::uint64_t mask_digest(const BoolArray& mask) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Eigen::Index i = 0; i < mask.size(); ++i) {
        h ^= mask(i) ? 0x9eULL : 0x31ULL;
        h *= 0x100000001b3ULL;
    }
    return h;
}

KernelParams default_kernel(const BoConfig& cfg) {
    if (cfg.kernel_init.lengthscales.size() == cfg.bounds.rows()) return cfg.kernel_init;
    KernelParams k = cfg.kernel_init;
    k.lengthscales = 0.25 * (cfg.bounds.col(1) - cfg.bounds.col(0));
    if (!(k.signal_variance > 0.0)) k.signal_variance = 1.0;
    return k;
}

double masked_min(const Dataset& data) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < data.size(); ++i)
        if (data.inlier_mask(i)) best = std::min(best, data.y(i));
    return best;
}

}  // namespace

void BoConfig::validate() const {
    validate_bounds(bounds);
    if (init_count < 2) throw std::invalid_argument("BoConfig: init_count must be >= 2");
    if (budget < init_count) throw std::invalid_argument("BoConfig: budget must be >= init_count");
    filter.validate();
}

Eigen::MatrixXd initial_design(int p, const Eigen::MatrixXd& bounds, std::uint64_t seed) {
    if (p < 1) throw std::invalid_argument("initial_design: p must be >= 1");
    CounterRng rng = CounterRng::keyed({seed, kInitStream});
    return latin_hypercube(p, bounds, rng);
}

RunLog run_bo(const Objective& objective, const BoConfig& cfg) {
    cfg.validate();
    const Eigen::Index d = cfg.bounds.rows();
    const KernelParams kernel0 = default_kernel(cfg);

    RunLog log;
    double y_star = std::numeric_limits<double>::infinity();
    std::optional<double> y_star_true;

    auto evaluate = [&](const Eigen::VectorXd& x, bool scheduled, bool reverted,
                        int n_masked, std::vector<int> masked_indices, std::uint64_t digest,
                        double elapsed) -> bool {
        const EvalResult res = objective(x);
        IterationRecord rec;
        rec.iteration = static_cast<int>(log.data.size()) + 1;
        rec.x = x;
        rec.y_observed = res.y;
        rec.was_injected_outlier = res.injected_outlier;
        rec.y_true = res.y_true;
        rec.scheduled = scheduled;
        rec.reverted = reverted;
        rec.n_masked = n_masked;
        rec.masked_indices = std::move(masked_indices);
        rec.mask_digest = digest;
        rec.wall_seconds = elapsed;
        if (std::isfinite(res.y)) y_star = std::min(y_star, res.y);
        rec.y_star_so_far = y_star;
        if (res.y_true) {
            y_star_true = y_star_true ? std::min(*y_star_true, *res.y_true) : *res.y_true;
            rec.y_star_true_so_far = y_star_true;
        }
        log.records.push_back(std::move(rec));
        if (!std::isfinite(res.y)) {
            log.aborted = true;
            log.abort_reason = "objective returned a non-finite value at iteration "
                               + std::to_string(log.records.back().iteration);
            return false;
        }
        log.data.append(x, res.y);
        return true;
    };

    const Eigen::MatrixXd X0 = initial_design(cfg.init_count, cfg.bounds, cfg.seed);
    for (int i = 0; i < cfg.init_count; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const Eigen::VectorXd x = X0.row(i).transpose();
        const double el =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!evaluate(x, false, false, 0, {}, mask_digest(log.data.inlier_mask), el)) {
            log.final_mask = log.data.inlier_mask;
            return log;
        }
    }

    KernelParams warm_gauss = kernel0;
    double warm_noise = cfg.noise_init;
    KernelParams warm_robust = kernel0;
    StudentTLikelihood warm_lik(cfg.t_lik_dof, cfg.t_lik_scale_init);
    TProcessParams warm_tproc;
    warm_tproc.kernel = kernel0;
    warm_tproc.relative_noise = cfg.tproc_relative_noise_init;
    warm_tproc.ig_shape = cfg.tproc_ig_shape;
    warm_tproc.ig_rate = cfg.tproc_ig_rate;

    BoolArray last_class_mask;  // most recent classification, original length
    bool have_classification = false;

    try {
        while (log.data.size() < cfg.budget) {
            const auto t0 = std::chrono::steady_clock::now();
            const int t = static_cast<int>(log.data.size());

            HyperFitOptions hyper;
            hyper.restarts = cfg.optimize_hypers ? cfg.hyper_restarts : 1;
            hyper.max_evals = cfg.hyper_max_evals;
            hyper.warm_start = true;

            bool scheduled = false;
            bool reverted = false;
            std::function<double(const Eigen::VectorXd&)> score;

            switch (cfg.mode) {
                case BoMode::Filtered: {
                    scheduled = schedule_says_filter(t, cfg.filter);
                    if (scheduled) {
                        hyper.seed = stream_key({cfg.seed, kHypRobustStream,
                                                 static_cast<std::uint64_t>(t)});
                        try {
                            StudentTGpModel robust = fit_gp_student_t(
                                log.data, warm_robust, warm_lik, cfg.optimize_hypers, hyper);
                            warm_robust = robust.kernel;
                            warm_lik = robust.lik;
                            const ClassificationReport report =
                                classify_outliers(log.data, robust, cfg.filter);
                            log.data.inlier_mask = report.inlier_mask;
                            last_class_mask = report.inlier_mask;
                            have_classification = true;
                            reverted = report.reverted;
                        } catch (const NumericalError&) {
                            // same fail-safe as an unconverged diagnostic model:
                            // keep every point and carry on
                            log.data.reset_mask();
                            reverted = true;
                        }
                    } else if (cfg.persist_mask && have_classification) {
                        log.data.inlier_mask.setConstant(true);
                        log.data.inlier_mask.head(last_class_mask.size()) = last_class_mask;
                    } else {
                        log.data.reset_mask();
                    }
                    break;
                }
                case BoMode::Baseline:
                case BoMode::TLikelihoodOnly:
                case BoMode::TProcessOnly:
                    log.data.reset_mask();
                    break;
            }

            const int n_masked = static_cast<int>(log.data.size() - log.data.inlier_count());
            std::vector<int> masked_indices;
            for (Eigen::Index i = 0; i < log.data.size(); ++i)
                if (!log.data.inlier_mask(i)) masked_indices.push_back(static_cast<int>(i));
            const std::uint64_t digest = mask_digest(log.data.inlier_mask);
            const double incumbent = masked_min(log.data);

            if (cfg.mode == BoMode::TLikelihoodOnly) {
                hyper.seed =
                    stream_key({cfg.seed, kHypRobustStream, static_cast<std::uint64_t>(t)});
                std::shared_ptr<StudentTGpModel> robust;
                try {
                    robust = std::make_shared<StudentTGpModel>(fit_gp_student_t(
                        log.data, warm_robust, warm_lik, cfg.optimize_hypers, hyper));
                } catch (const NumericalError&) {
                    // retry at the last well-behaved hyperparameters
                    robust = std::make_shared<StudentTGpModel>(
                        fit_gp_student_t(log.data, warm_robust, warm_lik, false, hyper));
                }
                warm_robust = robust->kernel;
                warm_lik = robust->lik;
                score = [robust, incumbent](const Eigen::VectorXd& x) {
                    return expected_improvement(predict_latent(*robust, x), incumbent);
                };
            } else if (cfg.mode == BoMode::TProcessOnly) {
                hyper.seed =
                    stream_key({cfg.seed, kHypRobustStream, static_cast<std::uint64_t>(t)});
                warm_tproc.kernel.signal_variance = 1.0;
                auto tp = std::make_shared<TProcessModel>(
                    fit_tprocess(log.data, warm_tproc, cfg.optimize_hypers, hyper));
                warm_tproc = tp->params;
                score = [tp, incumbent](const Eigen::VectorXd& x) {
                    return expected_improvement(predict_tprocess(*tp, x), incumbent);
                };
            } else {
                hyper.seed =
                    stream_key({cfg.seed, kHypGaussStream, static_cast<std::uint64_t>(t)});
                auto gp = std::make_shared<GaussianGpModel>(fit_gp_gaussian(
                    log.data, warm_gauss, warm_noise, cfg.optimize_hypers, hyper));
                warm_gauss = gp->kernel;
                warm_noise = gp->noise_variance;
                score = [gp, incumbent](const Eigen::VectorXd& x) {
                    return expected_improvement(predict_gaussian(*gp, x, false), incumbent);
                };
            }

            AcquisitionOptions acq = cfg.acq;
            acq.seed = stream_key({cfg.seed, kAcqStream, static_cast<std::uint64_t>(t)});
            const Eigen::VectorXd x_next = maximize_acquisition(score, cfg.bounds, acq);

            const double el =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (!evaluate(x_next, scheduled, reverted, n_masked, std::move(masked_indices), digest, el)) break;
        }
    } catch (const NumericalError& err) {
        log.aborted = true;
        log.abort_reason = err.what();
    } catch (const InsufficientDataError& err) {
        log.aborted = true;
        log.abort_reason = err.what();
    }

    log.final_mask = BoolArray::Constant(log.data.size(), true);
    if (have_classification)
        log.final_mask.head(last_class_mask.size()) = last_class_mask;
    (void)d;
    return log;
}

}  // namespace orbo
