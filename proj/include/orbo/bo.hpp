#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orbo/acquisition.hpp"
#include "orbo/dataset.hpp"
#include "orbo/gp_gaussian.hpp"
#include "orbo/kernels.hpp"
#include "orbo/outlier_filter.hpp"

namespace orbo {

enum class BoMode { Filtered, TLikelihoodOnly, TProcessOnly, Baseline };

// One objective evaluation. The harness may attach the uncorrupted value and
// whether it injected an outlier; a bare objective just fills y.
struct EvalResult {
    double y = 0.0;
    std::optional<bool> injected_outlier;
    std::optional<double> y_true;
};

using Objective = std::function<EvalResult(const Eigen::VectorXd&)>;

struct BoConfig {
    int budget = 50;      // T, total evaluations including the initial design
    int init_count = 10;  // p
    Eigen::MatrixXd bounds;  // d x 2
    BoMode mode = BoMode::Filtered;
    FilterConfig filter;
    std::uint64_t seed = 0;

    // On iterations where the schedule is silent the literal reading of the
    // algorithm refits on all points; setting persist_mask keeps the last
    // classification instead.
    bool persist_mask = false;

    bool optimize_hypers = true;
    KernelParams kernel_init;  // empty lengthscales: defaults to 0.25 * box width
    double noise_init = 1e-2;
    double t_lik_dof = 4.0;
    double t_lik_scale_init = 0.1;
    double tproc_relative_noise_init = 1e-2;
    double tproc_ig_shape = 2.0;
    double tproc_ig_rate = 1.0;

    int hyper_restarts = 2;
    int hyper_max_evals = 100;
    AcquisitionOptions acq;  // seed is derived per iteration from `seed`

    void validate() const;
};

struct IterationRecord {
    int iteration = 0;  // 1-based observation index
    Eigen::VectorXd x;
    double y_observed = 0.0;
    std::optional<bool> was_injected_outlier;
    std::optional<double> y_true;
    double y_star_so_far = 0.0;  // best observed target so far (min)
    std::optional<double> y_star_true_so_far;
    bool scheduled = false;  // a classification ran while acquiring this point
    bool reverted = false;
    int n_masked = 0;  // points excluded from the surrogate fit for this step
    std::vector<int> masked_indices;
    std::uint64_t mask_digest = 0;
    double wall_seconds = 0.0;
};

struct RunLog {
    std::vector<IterationRecord> records;
    Dataset data;         // final dataset; mask as used on the last fit
    BoolArray final_mask; // last classification, padded with inliers
    bool aborted = false;
    std::string abort_reason;
};

// Latin hypercube initial design over bounds, deterministic in the seed.
Eigen::MatrixXd initial_design(int p, const Eigen::MatrixXd& bounds, std::uint64_t seed);

// One full optimization run in the requested mode.
RunLog run_bo(const Objective& objective, const BoConfig& cfg);

}  // namespace orbo
