#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "orbo/dataset.hpp"
#include "orbo/gp_student_t.hpp"

namespace orbo {

struct FilterConfig {
    double alpha = 0.05;  // per-tail rejection level
    int n_init = 10;      // iterations before the first classification
    int n_s = 2;          // classification period afterwards

    void validate() const {
        if (!(alpha > 0.0 && alpha < 0.5))
            throw std::invalid_argument("FilterConfig: alpha must lie in (0, 0.5)");
        if (n_init < 1) throw std::invalid_argument("FilterConfig: n_init must be >= 1");
        if (n_s < 1) throw std::invalid_argument("FilterConfig: n_s must be >= 1");
    }
};

struct ClassificationReport {
    BoolArray inlier_mask;
    int n_outliers = 0;
    bool reverted = false;    // safeguard fired (or model unusable); mask is all-true
    Eigen::VectorXd scores;   // standardized residuals under the observation predictive
};

// Half-points rule: a classification leaving fewer than floor(total/2)
// inliers is not trusted.
inline bool safeguard_trips(Eigen::Index inliers, Eigen::Index total) {
    return inliers < total / 2;
}

// Score every observation against the robust model's observation-level
// predictive and flag the two alpha-tails. The whole mask is recomputed from
// scratch: no point is ever permanently rejected.
ClassificationReport classify_outliers(const Dataset& data, const StudentTGpModel& robust_model,
                                       const FilterConfig& cfg);

// True when a classification is due: after n_init iterations and then once
// every n_s.
inline bool schedule_says_filter(int iteration, const FilterConfig& cfg) {
    if (iteration < 1) throw std::invalid_argument("schedule_says_filter: iteration must be >= 1");
    return iteration >= cfg.n_init && (iteration - cfg.n_init) % cfg.n_s == 0;
}

}  // namespace orbo
