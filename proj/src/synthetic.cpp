#include "orbo/synthetic.hpp"

#include <cmath>

#include "orbo/common.hpp"
#include "orbo/rng.hpp"

namespace orbo {

GpSampleFunction::GpSampleFunction(KernelParams kernel, int dim, std::uint64_t seed)
    : kernel_(std::move(kernel)), dim_(dim), seed_(seed) {
    kernel_.validate(dim);
    reserve(64);
}

void GpSampleFunction::reserve(Eigen::Index capacity) {
    if (X_.rows() >= capacity) return;
    X_.conservativeResize(capacity, dim_);
    f_.conservativeResize(capacity);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(capacity, capacity);
    if (size_ > 0) L.topLeftCorner(size_, size_) = L_.topLeftCorner(size_, size_);
    L_ = std::move(L);
    w_.conservativeResize(capacity);
}

double GpSampleFunction::operator()(const Eigen::VectorXd& x) {
    if (x.size() != dim_) throw std::invalid_argument("GpSampleFunction: dimension mismatch");
    for (Eigen::Index i = 0; i < size_; ++i)
        if ((X_.row(i).transpose().array() == x.array()).all()) return f_(i);

    if (size_ + 1 > X_.rows()) reserve(2 * X_.rows());

    const double jitter = jitter_for(kernel_);
    const double kxx = kernel_.signal_variance + jitter;
    double mean = 0.0;
    double var = kxx;
    Eigen::VectorXd v;
    if (size_ > 0) {
        Eigen::VectorXd k(size_);
        for (Eigen::Index i = 0; i < size_; ++i)
            k(i) = kernel_value(X_.row(i).transpose(), x, kernel_);
        v = L_.topLeftCorner(size_, size_)
                .triangularView<Eigen::Lower>()
                .solve(k);
        mean = v.dot(w_.head(size_));
        var = kxx - v.squaredNorm();
        if (var < 0.0) var = 0.0;
    }

    CounterRng rng = CounterRng::keyed({seed_, draws_++});
    const double value = mean + std::sqrt(var) * rng.normal();

    const double pivot = std::sqrt(std::max(var, jitter));
    X_.row(size_) = x.transpose();
    f_(size_) = value;
    if (size_ > 0) L_.row(size_).head(size_) = v.transpose();
    L_(size_, size_) = pivot;
    w_(size_) = (value - (size_ > 0 ? v.dot(w_.head(size_)) : 0.0)) / pivot;
    ++size_;
    return value;
}

std::pair<double, bool> corrupt(double y_true, const OutlierModel& model, int iteration,
                                std::uint64_t trial_seed) {
    CounterRng rng = CounterRng::keyed(
        {model.seed, trial_seed, static_cast<std::uint64_t>(iteration)});
    if (rng.uniform() < model.rate) {
        const double value = model.low + (model.high - model.low) * rng.uniform();
        return {value, true};
    }
    return {y_true, false};
}

}  // namespace orbo
