#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "orbo/special.hpp"

namespace orbo {

// Student-t observation model t(y; f, scale, dof). Heavy tails make the
// log density convex in f once |y - f| > scale * sqrt(dof), so its negative
// Hessian can go negative out in the tails.
struct StudentTLikelihood {
    double dof = 4.0;
    double scale = 1.0;  // sigma_0

    StudentTLikelihood() = default;
    StudentTLikelihood(double dof_, double scale_) : dof(dof_), scale(scale_) {
        if (!(dof >= 2.0)) throw std::invalid_argument("StudentTLikelihood: dof must be >= 2");
        if (!(scale > 0.0)) throw std::invalid_argument("StudentTLikelihood: scale must be positive");
    }

    double log_pdf(double y, double f) const {
        const double e = y - f;
        return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof)
               - 0.5 * std::log(dof * kPi) - std::log(scale)
               - 0.5 * (dof + 1.0) * std::log1p(e * e / (dof * scale * scale));
    }

    // d/df and d^2/df^2 of log_pdf.
    std::pair<double, double> dlog_pdf(double y, double f) const {
        const double e = y - f;
        const double denom = dof * scale * scale + e * e;
        const double first = (dof + 1.0) * e / denom;
        const double second = (dof + 1.0) * (e * e - dof * scale * scale) / (denom * denom);
        return {first, second};
    }
};

// Gaussian observation model; plugging it into the Laplace machinery must
// reproduce the exact GP posterior.
struct GaussianLikelihood {
    double variance = 1.0;

    double log_pdf(double y, double f) const {
        const double e = y - f;
        return -0.5 * e * e / variance - 0.5 * std::log(2.0 * kPi * variance);
    }

    std::pair<double, double> dlog_pdf(double y, double f) const {
        return {(y - f) / variance, -1.0 / variance};
    }
};

}  // namespace orbo
