#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "orbo/rng.hpp"

namespace orbo {

inline void validate_bounds(const Eigen::MatrixXd& bounds) {
    if (bounds.cols() != 2 || bounds.rows() < 1)
        throw std::invalid_argument("bounds must be d x 2 (lower, upper)");
    for (Eigen::Index j = 0; j < bounds.rows(); ++j) {
        if (!std::isfinite(bounds(j, 0)) || !std::isfinite(bounds(j, 1))
            || !(bounds(j, 0) < bounds(j, 1)))
            throw std::invalid_argument("bounds must be finite with lower < upper");
    }
}

inline Eigen::MatrixXd unit_box(Eigen::Index d) {
    Eigen::MatrixXd b(d, 2);
    b.col(0).setZero();
    b.col(1).setOnes();
    return b;
}

// Latin hypercube on [0,1)^d: each dimension split into n equal strata, one
// uniform sample per stratum, strata order an independent permutation per
// dimension.
inline Eigen::MatrixXd latin_hypercube_unit(int n, int d, CounterRng& rng) {
    Eigen::MatrixXd pts(n, d);
    std::vector<int> perm(n);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[static_cast<int>(rng.bounded(i + 1))]);
        for (int i = 0; i < n; ++i)
            pts(i, j) = (perm[i] + rng.uniform()) / n;
    }
    return pts;
}

inline Eigen::MatrixXd scale_to_bounds(const Eigen::MatrixXd& unit, const Eigen::MatrixXd& bounds) {
    validate_bounds(bounds);
    Eigen::MatrixXd out(unit.rows(), unit.cols());
    for (Eigen::Index j = 0; j < unit.cols(); ++j)
        out.col(j) = bounds(j, 0) + (bounds(j, 1) - bounds(j, 0)) * unit.col(j).array();
    return out;
}

inline Eigen::MatrixXd latin_hypercube(int n, const Eigen::MatrixXd& bounds, CounterRng& rng) {
    return scale_to_bounds(latin_hypercube_unit(n, static_cast<int>(bounds.rows()), rng), bounds);
}

}  // namespace orbo
