#include "orbo/outlier_filter.hpp"

#include "orbo/special.hpp"

namespace orbo {

ClassificationReport classify_outliers(const Dataset& data, const StudentTGpModel& robust_model,
                                       const FilterConfig& cfg) {
    cfg.validate();
    data.validate();
    if (robust_model.size() != data.size())
        throw std::invalid_argument("classify_outliers: model was not fit on this dataset");

    const Eigen::Index t = data.size();
    ClassificationReport report;
    report.scores.resize(t);
    report.inlier_mask = BoolArray::Constant(t, true);

    const double hi = student_t_quantile(1.0 - cfg.alpha, robust_model.lik.dof);
    const double lo = student_t_quantile(cfg.alpha, robust_model.lik.dof);
    for (Eigen::Index i = 0; i < t; ++i) {
        const Predictive pred = predict_observation(robust_model, data.X.row(i).transpose());
        report.scores(i) = standardized_residual(pred, data.y(i));
    }

    if (!robust_model.state.converged) {  // fail safe: keep everything
        report.reverted = true;
        return report;
    }

    for (Eigen::Index i = 0; i < t; ++i)
        report.inlier_mask(i) = report.scores(i) >= lo && report.scores(i) <= hi;
    report.n_outliers = static_cast<int>(t - report.inlier_mask.count());

    if (safeguard_trips(report.inlier_mask.count(), t)) {
        report.inlier_mask.setConstant(true);
        report.reverted = true;
    }
    return report;
}

}  // namespace orbo
