#include "orbo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "orbo/design.hpp"
#include "orbo/rng.hpp"

namespace orbo {

namespace {

constexpr std::uint64_t kFunctionStream = 0x66756e63ULL;
constexpr std::uint64_t kProbeStream = 0x70726f62ULL;
constexpr std::uint64_t kRunStream = 0x72756e73ULL;
constexpr std::uint64_t kOutlierStream = 0x6f75746cULL;

}  // namespace

Eigen::MatrixXd ObjectiveSpec::resolved_bounds() const {
    if (bounds.size() > 0) {
        validate_bounds(bounds);
        if (bounds.rows() != dim)
            throw std::invalid_argument("ObjectiveSpec: bounds do not match dim");
        return bounds;
    }
    return unit_box(dim);
}

KernelParams ObjectiveSpec::resolved_kernel() const {
    const Eigen::MatrixXd b = resolved_bounds();
    KernelParams k;
    k.family = family;
    k.signal_variance = signal_variance;
    k.rq_alpha = rq_alpha;
    if (lengthscales.size() > 0) {
        if (lengthscales.size() != dim)
            throw std::invalid_argument("ObjectiveSpec: lengthscales do not match dim");
        k.lengthscales = lengthscales;
    } else {
        k.lengthscales = 0.1 * (b.col(1) - b.col(0));
    }
    k.validate(dim);
    return k;
}

ArmSpec arm_from_label(const std::string& label) {
    if (label == "filtered") return {BoMode::Filtered, true, label};
    if (label == "t_likelihood") return {BoMode::TLikelihoodOnly, true, label};
    if (label == "t_process") return {BoMode::TProcessOnly, true, label};
    if (label == "baseline") return {BoMode::Baseline, true, label};
    if (label == "no_outliers") return {BoMode::Baseline, false, label};
    throw std::invalid_argument("unknown mode label: " + label);
}

void ExperimentConfig::validate() const {
    objective.resolved_kernel();
    if (arms.empty()) throw std::invalid_argument("ExperimentConfig: at least one mode required");
    if (outlier_rates.empty())
        throw std::invalid_argument("ExperimentConfig: at least one outlier rate required");
    for (double r : outlier_rates)
        if (!(r >= 0.0 && r < 1.0))
            throw std::invalid_argument("ExperimentConfig: outlier rates must lie in [0, 1)");
    if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
    if (init_count < 2) throw std::invalid_argument("ExperimentConfig: init_count must be >= 2");
    if (budget < init_count)
        throw std::invalid_argument("ExperimentConfig: budget must be >= init_count");
    if (min_estimate_points < 1)
        throw std::invalid_argument("ExperimentConfig: min_estimate_points must be >= 1");
    if (jobs < 1) throw std::invalid_argument("ExperimentConfig: jobs must be >= 1");
    filter.validate();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const Eigen::MatrixXd bounds = cfg.objective.resolved_bounds();
    const KernelParams generator = cfg.objective.resolved_kernel();
    const int n_rates = static_cast<int>(cfg.outlier_rates.size());
    const int n_arms = static_cast<int>(cfg.arms.size());
    const int n_units = n_rates * cfg.trials;

    ExperimentResult result;
    result.trials.resize(static_cast<size_t>(n_units) * n_arms);

    auto run_unit = [&](int unit) {
        const int rate_idx = unit / cfg.trials;
        const int trial = unit % cfg.trials;
        const double rate = cfg.outlier_rates[rate_idx];
        const std::uint64_t urate = static_cast<std::uint64_t>(rate_idx);
        const std::uint64_t utrial = static_cast<std::uint64_t>(trial);

        GpSampleFunction fn(generator, cfg.objective.dim,
                            stream_key({cfg.seed, kFunctionStream, urate, utrial}));

        // Estimate the function minimum before any optimizer touches the
        // function: a space-filling probe followed by a pattern-search
        // descent into the best probe's basin.
        CounterRng probe_rng =
            CounterRng::keyed({cfg.seed, kProbeStream, urate, utrial});
        const Eigen::MatrixXd probes =
            latin_hypercube(cfg.min_estimate_points, bounds, probe_rng);
        std::vector<std::pair<double, Eigen::Index>> ranked(probes.rows());
        for (Eigen::Index i = 0; i < probes.rows(); ++i)
            ranked[i] = {fn(probes.row(i).transpose()), i};
        std::sort(ranked.begin(), ranked.end());

        double f_min = ranked.front().first;
        const int basins = std::min<int>(5, static_cast<int>(ranked.size()));
        for (int b = 0; b < basins; ++b) {
            Eigen::VectorXd x_min = probes.row(ranked[b].second).transpose();
            double best = ranked[b].first;
            Eigen::VectorXd step = 0.05 * (bounds.col(1) - bounds.col(0));
            for (int sweep = 0; sweep < 12; ++sweep) {
                for (Eigen::Index j = 0; j < bounds.rows(); ++j) {
                    for (double dir : {+1.0, -1.0}) {
                        Eigen::VectorXd trial_x = x_min;
                        trial_x(j) = std::min(
                            std::max(trial_x(j) + dir * step(j), bounds(j, 0)), bounds(j, 1));
                        const double v = fn(trial_x);
                        if (v < best) {
                            best = v;
                            x_min = trial_x;
                        }
                    }
                }
                step *= 0.5;
            }
            f_min = std::min(f_min, best);
        }

        OutlierModel outliers;
        outliers.rate = rate;
        outliers.seed = stream_key({cfg.seed, kOutlierStream, urate});

        for (int arm_idx = 0; arm_idx < n_arms; ++arm_idx) {
            const ArmSpec& arm = cfg.arms[arm_idx];
            TrialResult& slot =
                result.trials[(static_cast<size_t>(unit)) * n_arms + arm_idx];
            slot.arm_label = arm.label;
            slot.rate = rate;
            slot.trial = trial;

            BoConfig bo;
            bo.budget = cfg.budget;
            bo.init_count = cfg.init_count;
            bo.bounds = bounds;
            bo.mode = arm.mode;
            bo.filter = cfg.filter;
            bo.persist_mask = cfg.persist_mask;
            bo.hyper_restarts = cfg.hyper_restarts;
            bo.hyper_max_evals = cfg.hyper_max_evals;
            bo.acq = cfg.acq;
            bo.seed = stream_key({cfg.seed, kRunStream, urate, utrial});

            int eval_index = 0;
            Objective objective = [&](const Eigen::VectorXd& x) {
                ++eval_index;
                EvalResult res;
                const double y_true = fn(x);
                res.y_true = y_true;
                if (arm.inject) {
                    auto [y_obs, was] = corrupt(y_true, outliers, eval_index, utrial);
                    res.y = y_obs;
                    res.injected_outlier = was;
                } else {
                    res.y = y_true;
                    res.injected_outlier = false;
                }
                return res;
            };

            try {
                slot.log = run_bo(objective, bo);
                slot.ok = !slot.log.aborted;
                if (!slot.ok) slot.error = slot.log.abort_reason;
            } catch (const std::exception& err) {
                slot.ok = false;
                slot.error = err.what();
            }
            slot.f_min_estimate = f_min;
            slot.regret.reserve(slot.log.records.size());
            for (const auto& rec : slot.log.records)
                slot.regret.push_back(rec.y_star_true_so_far.value_or(
                                          std::numeric_limits<double>::quiet_NaN())
                                      - f_min);
        }
    };

    const int workers = std::min(cfg.jobs, n_units);
    if (workers <= 1) {
        for (int u = 0; u < n_units; ++u) run_unit(u);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const int u = next.fetch_add(1);
                    if (u >= n_units) return;
                    run_unit(u);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Summaries in (rate, arm) order over the trials that completed.
    for (int rate_idx = 0; rate_idx < n_rates; ++rate_idx) {
        for (int arm_idx = 0; arm_idx < n_arms; ++arm_idx) {
            SummaryCurve curve;
            curve.arm_label = cfg.arms[arm_idx].label;
            curve.rate = cfg.outlier_rates[rate_idx];
            curve.mean_regret.assign(cfg.budget, 0.0);
            curve.ci_halfwidth.assign(cfg.budget, 0.0);
            for (int k = 0; k < cfg.budget; ++k) {
                double sum = 0.0;
                int n = 0;
                for (int trial = 0; trial < cfg.trials; ++trial) {
                    const TrialResult& tr =
                        result.trials[(static_cast<size_t>(rate_idx) * cfg.trials + trial)
                                          * n_arms
                                      + arm_idx];
                    if (!tr.ok || k >= static_cast<int>(tr.regret.size())) continue;
                    sum += tr.regret[k];
                    ++n;
                }
                if (n == 0) continue;
                const double mean = sum / n;
                curve.mean_regret[k] = mean;
                if (n > 1) {
                    double ss = 0.0;
                    for (int trial = 0; trial < cfg.trials; ++trial) {
                        const TrialResult& tr =
                            result.trials[(static_cast<size_t>(rate_idx) * cfg.trials + trial)
                                              * n_arms
                                          + arm_idx];
                        if (!tr.ok || k >= static_cast<int>(tr.regret.size())) continue;
                        ss += (tr.regret[k] - mean) * (tr.regret[k] - mean);
                    }
                    curve.ci_halfwidth[k] = 1.96 * std::sqrt(ss / (n - 1)) / std::sqrt(n);
                }
            }
            result.summaries.push_back(std::move(curve));
        }
    }

    for (const auto& tr : result.trials) {
        if (!tr.ok) {
            result.complete = false;
            result.errors.push_back(tr.arm_label + " rate " + std::to_string(tr.rate) + " trial "
                                    + std::to_string(tr.trial) + ": " + tr.error);
        }
    }
    return result;
}

const SummaryCurve& find_summary(const ExperimentResult& result, const std::string& arm_label,
                                 double rate) {
    for (const auto& s : result.summaries)
        if (s.arm_label == arm_label && s.rate == rate) return s;
    throw std::invalid_argument("find_summary: no such arm/rate");
}

}  // namespace orbo
