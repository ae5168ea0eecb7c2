#pragma once

#include <Eigen/Dense>

#include "orbo/common.hpp"

namespace orbo {

struct CholeskyResult {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;  // total diagonal shift applied on top of the input
};

// Factor a symmetric matrix that should be positive definite, escalating a
// diagonal shift by 10x per failure from base_jitter up to max_jitter.
inline CholeskyResult cholesky_with_escalation(const Eigen::MatrixXd& A, double base_jitter,
                                               double max_jitter) {
    CholeskyResult out;
    out.llt.compute(A);
    if (out.llt.info() == Eigen::Success) return out;
    double jitter = base_jitter;
    while (jitter <= max_jitter) {
        out.llt.compute(A + jitter * Eigen::MatrixXd::Identity(A.rows(), A.cols()));
        if (out.llt.info() == Eigen::Success) {
            out.jitter = jitter;
            return out;
        }
        jitter *= 10.0;
    }
    throw NumericalError("Cholesky factorization failed after jitter escalation");
}

inline double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace orbo
