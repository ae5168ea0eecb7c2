#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "orbo/predictive.hpp"

namespace orbo {

// Expected improvement under minimization: E[max(0, best - y)].
double expected_improvement_gaussian(double mean, double stddev, double best);

// Closed form for a location-scale Student-t predictive; scale is the t scale
// parameter, dof must exceed 1 for the expectation to exist.
double expected_improvement_student_t(double mean, double scale, double dof, double best);

double expected_improvement(const Predictive& pred, double best);

struct AcquisitionOptions {
    int candidates = 1000;
    int top_refine = 5;
    int sweeps = 20;
    std::uint64_t seed = 0;
};

// Seeded candidate sweep: score a Latin hypercube, then coordinate-refine the
// best few with a shrinking step. The result never scores below the best raw
// candidate and always lies inside bounds.
Eigen::VectorXd maximize_acquisition(const std::function<double(const Eigen::VectorXd&)>& score,
                                     const Eigen::MatrixXd& bounds,
                                     const AcquisitionOptions& options = {});

}  // namespace orbo
