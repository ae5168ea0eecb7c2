#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "orbo/kernels.hpp"

namespace orbo {

// Exact lazily-defined GP sample: every new query is drawn from the
// conditional of the generating GP given all values revealed so far, so any
// query order traces out the same underlying random function. Repeated
// queries at a cached location return the cached value.
class GpSampleFunction {
public:
    GpSampleFunction(KernelParams kernel, int dim, std::uint64_t seed);

    double operator()(const Eigen::VectorXd& x);

    int dim() const { return dim_; }
    Eigen::Index cache_size() const { return size_; }

private:
    void reserve(Eigen::Index capacity);

    KernelParams kernel_;
    int dim_;
    std::uint64_t seed_;
    std::uint64_t draws_ = 0;
    Eigen::Index size_ = 0;
    Eigen::MatrixXd X_;  // capacity x d, first size_ rows valid
    Eigen::VectorXd f_;
    Eigen::MatrixXd L_;  // growing lower Cholesky factor of K + jitter
    Eigen::VectorXd w_;  // L^{-1} f
};

// Uniform-valued corruption on [low, high] at the given rate. Decisions and
// values depend only on (seed, trial_seed, iteration): common random numbers
// across every method compared.
struct OutlierModel {
    double rate = 0.1;
    double low = 1.0;
    double high = 2.0;
    std::uint64_t seed = 0;
};

std::pair<double, bool> corrupt(double y_true, const OutlierModel& model, int iteration,
                                std::uint64_t trial_seed);

}  // namespace orbo
