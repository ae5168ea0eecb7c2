#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "orbo/bo.hpp"
#include "orbo/kernels.hpp"
#include "orbo/synthetic.hpp"

namespace orbo {

// Declaration of the random objective: a GP sample with this kernel over the
// given box.
struct ObjectiveSpec {
    KernelFamily family = KernelFamily::Matern52;
    int dim = 2;
    Eigen::MatrixXd bounds;        // empty: unit box
    Eigen::VectorXd lengthscales;  // empty: 0.1 * box width per dimension
    double signal_variance = 1.0;
    double rq_alpha = 2.0;

    Eigen::MatrixXd resolved_bounds() const;
    KernelParams resolved_kernel() const;
};

// One benchmark arm: an engine mode plus whether corruption is applied.
// "no_outliers" is the baseline engine run on the clean stream.
struct ArmSpec {
    BoMode mode = BoMode::Filtered;
    bool inject = true;
    std::string label;
};

ArmSpec arm_from_label(const std::string& label);

struct ExperimentConfig {
    ObjectiveSpec objective;
    std::vector<ArmSpec> arms;
    std::vector<double> outlier_rates = {0.1, 0.2};
    int trials = 20;
    int budget = 50;
    int init_count = 10;
    FilterConfig filter;
    std::uint64_t seed = 0;
    int min_estimate_points = 1000;  // probe count for the per-trial minimum estimate
    int jobs = 1;
    bool persist_mask = false;
    int hyper_restarts = 2;
    int hyper_max_evals = 100;
    AcquisitionOptions acq;

    void validate() const;
};

struct TrialResult {
    std::string arm_label;
    double rate = 0.0;
    int trial = 0;
    RunLog log;
    double f_min_estimate = 0.0;
    std::vector<double> regret;  // best true value so far minus the minimum estimate
    bool ok = true;
    std::string error;
};

struct SummaryCurve {
    std::string arm_label;
    double rate = 0.0;
    std::vector<double> mean_regret;
    std::vector<double> ci_halfwidth;  // 1.96 * stderr across trials
};

struct ExperimentResult {
    std::vector<TrialResult> trials;      // rate-major, then trial, then arm
    std::vector<SummaryCurve> summaries;  // rate-major, then arm
    bool complete = true;
    std::vector<std::string> errors;
};

// Full protocol: per (rate, trial) one shared random function and outlier
// stream, every arm run against them with a common seed. Trials are
// independent units and may run on up to `jobs` threads; results are
// bit-identical to the sequential order.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

const SummaryCurve& find_summary(const ExperimentResult& result, const std::string& arm_label,
                                 double rate);

}  // namespace orbo
