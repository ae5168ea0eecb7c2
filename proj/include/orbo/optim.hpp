#pragma once

#include <Eigen/Dense>
#include <functional>

namespace orbo {

using ScalarObjective = std::function<double(const Eigen::VectorXd&)>;

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evaluations = 0;
};

// Derivative-free simplex minimization with a fixed evaluation budget.
// The initial simplex is x0 plus one vertex per coordinate at x0 + step_i e_i.
NelderMeadResult nelder_mead_minimize(const ScalarObjective& f, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& initial_step, int max_evals);

}  // namespace orbo
