#include "orbo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "orbo/design.hpp"
#include "orbo/rng.hpp"
#include "orbo/special.hpp"

namespace orbo {

double expected_improvement_gaussian(double mean, double stddev, double best) {
    const double improvement = best - mean;
    if (stddev <= 0.0) return std::max(0.0, improvement);
    const double z = improvement / stddev;
    const double ei = improvement * normal_cdf(z) + stddev * normal_pdf(z);
    return std::max(0.0, ei);
}

double expected_improvement_student_t(double mean, double scale, double dof, double best) {
    if (!(dof > 1.0))
        throw std::invalid_argument("expected_improvement_student_t: dof must exceed 1");
    const double improvement = best - mean;
    if (scale <= 0.0) return std::max(0.0, improvement);
    const double z = improvement / scale;
    const double ei = improvement * student_t_cdf(z, dof)
                      + scale * (dof / (dof - 1.0)) * (1.0 + z * z / dof)
                            * student_t_pdf(z, dof);
    return std::max(0.0, ei);
}

double expected_improvement(const Predictive& pred, double best) {
    if (pred.family == PredictiveFamily::Gaussian)
        return expected_improvement_gaussian(pred.mean, pred.stddev(), best);
    return expected_improvement_student_t(pred.mean, pred.scale(), pred.dof, best);
}

Eigen::VectorXd maximize_acquisition(const std::function<double(const Eigen::VectorXd&)>& score,
                                     const Eigen::MatrixXd& bounds,
                                     const AcquisitionOptions& options) {
    validate_bounds(bounds);
    const Eigen::Index d = bounds.rows();
    CounterRng rng(options.seed);
    const Eigen::MatrixXd cand = latin_hypercube(options.candidates, bounds, rng);

    std::vector<double> values(cand.rows());
    for (Eigen::Index i = 0; i < cand.rows(); ++i)
        values[i] = score(cand.row(i).transpose());

    std::vector<int> order(cand.rows());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] > values[b]; });

    Eigen::VectorXd best_x = cand.row(order[0]).transpose();
    double best_v = values[order[0]];

    const Eigen::VectorXd width = bounds.col(1) - bounds.col(0);
    const int n_refine = std::min<int>(options.top_refine, static_cast<int>(cand.rows()));
    for (int r = 0; r < n_refine; ++r) {
        Eigen::VectorXd x = cand.row(order[r]).transpose();
        double v = values[order[r]];
        Eigen::VectorXd step = 0.1 * width;
        for (int sweep = 0; sweep < options.sweeps; ++sweep) {
            for (Eigen::Index j = 0; j < d; ++j) {
                for (double dir : {+1.0, -1.0}) {
                    Eigen::VectorXd trial = x;
                    trial(j) = std::min(std::max(trial(j) + dir * step(j), bounds(j, 0)),
                                        bounds(j, 1));
                    const double tv = score(trial);
                    if (tv > v) {
                        v = tv;
                        x = trial;
                    }
                }
            }
            step *= 0.6;
        }
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return best_x;
}

}  // namespace orbo
