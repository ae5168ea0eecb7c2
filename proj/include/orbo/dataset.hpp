#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace orbo {

using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

// Observed inputs, targets, and the inlier mask. Observations are never
// deleted; exclusion happens only through the mask.
struct Dataset {
    Eigen::MatrixXd X;      // t x d
    Eigen::VectorXd y;      // t
    BoolArray inlier_mask;  // t, true = inlier

    Dataset() = default;
    Dataset(Eigen::MatrixXd inputs, Eigen::VectorXd targets)
        : X(std::move(inputs)), y(std::move(targets)) {
        inlier_mask = BoolArray::Constant(y.size(), true);
        validate();
    }

    Eigen::Index size() const { return y.size(); }
    Eigen::Index dim() const { return X.cols(); }
    Eigen::Index inlier_count() const { return inlier_mask.count(); }

    void validate() const {
        if (X.rows() != y.size() || y.size() != inlier_mask.size())
            throw std::invalid_argument("Dataset: X rows, y, and inlier_mask must be index-aligned");
    }

    void append(const Eigen::VectorXd& x, double target) {
        if (size() > 0 && x.size() != dim())
            throw std::invalid_argument("Dataset::append: dimension mismatch");
        X.conservativeResize(X.rows() + 1, size() == 0 ? x.size() : dim());
        X.row(X.rows() - 1) = x.transpose();
        y.conservativeResize(y.size() + 1);
        y(y.size() - 1) = target;
        inlier_mask.conservativeResize(inlier_mask.size() + 1);
        inlier_mask(inlier_mask.size() - 1) = true;
    }

    void reset_mask() { inlier_mask.setConstant(true); }

    // Rows currently marked inlier, as a fresh all-inlier dataset.
    Dataset masked() const {
        validate();
        const Eigen::Index n = inlier_count();
        Eigen::MatrixXd Xm(n, dim());
        Eigen::VectorXd ym(n);
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < size(); ++i) {
            if (inlier_mask(i)) {
                Xm.row(r) = X.row(i);
                ym(r) = y(i);
                ++r;
            }
        }
        return Dataset(std::move(Xm), std::move(ym));
    }
};

}  // namespace orbo
