#pragma once

#include <Eigen/Dense>

#include "orbo/dataset.hpp"
#include "orbo/gp_gaussian.hpp"
#include "orbo/kernels.hpp"
#include "orbo/predictive.hpp"

namespace orbo {

// Student-t process: the signal amplitude carries an inverse-gamma prior,
// marginalized in closed form. The noise term sits inside the bracketed
// matrix, so it rides on the same unknown scale as the signal.
struct TProcessParams {
    KernelParams kernel;          // amplitude held fixed; scale comes from the prior
    double relative_noise = 1e-6; // sigma_n^2 inside the bracket
    double ig_shape = 2.0;        // a > 1 so predictive variances stay finite
    double ig_rate = 1.0;         // b > 0

    void validate(Eigen::Index dim) const {
        kernel.validate(dim);
        if (!(relative_noise >= 0.0))
            throw std::invalid_argument("TProcessParams: relative_noise must be nonnegative");
        if (!(ig_shape > 1.0)) throw std::invalid_argument("TProcessParams: ig_shape must be > 1");
        if (!(ig_rate > 0.0)) throw std::invalid_argument("TProcessParams: ig_rate must be > 0");
    }
};

// Log density of the marginalized multivariate Student-t at y given inputs X:
// log Gamma(a+n/2) - log Gamma(a) - (n/2) log(2*pi*b) - 1/2 log|K~|
//   - (a+n/2) log(1 + y'K~^{-1}y / (2b)),  K~ = gram + I sigma_n^2.
double mvt_log_density(const Eigen::VectorXd& y, const TProcessParams& params,
                       const Eigen::MatrixXd& X);

struct TProcessModel {
    TProcessParams params;
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    Eigen::LLT<Eigen::MatrixXd> chol;  // bracketed matrix K~
    Eigen::VectorXd alpha;             // K~^{-1} y
    double quadratic = 0.0;            // y'K~^{-1}y
    double log_evidence = 0.0;

    Eigen::Index size() const { return y.size(); }
};

// optimize=true tunes lengthscales and the relative noise against the
// marginal density; the inverse-gamma parameters stay fixed.
TProcessModel fit_tprocess(const Dataset& data, const TProcessParams& init, bool optimize,
                           const HyperFitOptions& options = {});

// Predictive is Student-t with dof 2a + t; location matches the Gaussian GP
// under K~ exactly, the scale picks up the posterior of the amplitude.
Predictive predict_tprocess(const TProcessModel& model, const Eigen::VectorXd& x_q);

}  // namespace orbo
