#pragma once

#include <cmath>
#include <stdexcept>

#include "orbo/special.hpp"

namespace orbo {

enum class PredictiveFamily { Gaussian, StudentT };

// Per-query predictive distribution. `variance` is always the distribution
// variance; for Student-t predictives the underlying scale parameter is
// recovered through scale(), which needs dof > 2.
struct Predictive {
    double mean = 0.0;
    double variance = 0.0;
    PredictiveFamily family = PredictiveFamily::Gaussian;
    double dof = std::numeric_limits<double>::infinity();
    bool includes_noise = false;

    static Predictive gaussian(double mean, double variance, bool includes_noise) {
        check_variance(variance);
        return Predictive{mean, variance, PredictiveFamily::Gaussian,
                          std::numeric_limits<double>::infinity(), includes_noise};
    }

    static Predictive student_t_from_variance(double mean, double variance, double dof,
                                              bool includes_noise) {
        check_variance(variance);
        check_dof(dof);
        return Predictive{mean, variance, PredictiveFamily::StudentT, dof, includes_noise};
    }

    static Predictive student_t_from_scale(double mean, double scale_sq, double dof,
                                           bool includes_noise) {
        check_variance(scale_sq);
        check_dof(dof);
        return Predictive{mean, scale_sq * dof / (dof - 2.0), PredictiveFamily::StudentT, dof,
                          includes_noise};
    }

    double stddev() const { return std::sqrt(variance); }

    // Location-scale scale parameter of the distribution.
    double scale() const {
        if (family == PredictiveFamily::Gaussian) return std::sqrt(variance);
        return std::sqrt(variance * (dof - 2.0) / dof);
    }

private:
    static void check_variance(double v) {
        if (!(v >= 0.0)) throw std::invalid_argument("Predictive: variance must be nonnegative");
    }
    static void check_dof(double dof) {
        if (!(dof > 2.0))
            throw std::invalid_argument("Predictive: Student-t with a variance requires dof > 2");
    }
};

inline double standardized_residual(const Predictive& pred, double y) {
    return (y - pred.mean) / pred.scale();
}

inline double log_density(const Predictive& pred, double y) {
    const double s = pred.scale();
    const double z = (y - pred.mean) / s;
    if (pred.family == PredictiveFamily::Gaussian)
        return -0.5 * z * z - 0.5 * std::log(2.0 * kPi) - std::log(s);
    return student_t_log_pdf(z, pred.dof) - std::log(s);
}

}  // namespace orbo
