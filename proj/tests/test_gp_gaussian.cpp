#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracles.hpp"
#include "orbo/common.hpp"
#include "orbo/gp_gaussian.hpp"
#include "orbo/linalg.hpp"

using namespace orbo;

namespace {

Dataset random_dataset(CounterRng& rng, int t, int d) {
    Eigen::MatrixXd X(t, d);
    Eigen::VectorXd y(t);
    for (int i = 0; i < t; ++i) {
        for (int j = 0; j < d; ++j) X(i, j) = rng.uniform(-1.0, 1.0);
        y(i) = rng.normal();
    }
    return Dataset(X, y);
}

KernelParams unit_kernel(int d, double ls = 0.5) {
    return KernelParams::isotropic(d, ls);
}

}  // namespace

TEST_CASE("single point with fixed hyperparameters") {
    Eigen::MatrixXd X(1, 1);
    X << 0.2;
    Eigen::VectorXd y(1);
    y << 1.5;
    const auto model = fit_gp_gaussian(Dataset(X, y), unit_kernel(1), 0.3, false);
    const Eigen::MatrixXd K = model.chol.reconstructedMatrix();
    CHECK(K(0, 0) == doctest::Approx(1.0 + 0.3 + 1e-8).epsilon(1e-12));
    CHECK_THROWS_AS(fit_gp_gaussian(Dataset(X, y), unit_kernel(1), 0.3, true),
                    InsufficientDataError);
}

TEST_CASE("log marginal likelihood matches the dense oracle") {
    CounterRng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        const auto data = random_dataset(rng, 5, 2);
        const auto kernel = unit_kernel(2, 0.7);
        oracles::DenseGpOracle oracle(data.X, data.y, kernel, 0.05);
        CHECK(log_marginal_likelihood(data, kernel, 0.05)
              == doctest::Approx(oracle.log_marginal()).epsilon(1e-8));
    }
}

TEST_CASE("scalar case reduces to the standard normal log density") {
    Eigen::MatrixXd X(1, 1);
    X << 0.0;
    Eigen::VectorXd y(1);
    y << 0.0;
    CHECK(log_marginal_likelihood(Dataset(X, y), unit_kernel(1), 0.0)
          == doctest::Approx(-0.5 * std::log(2.0 * kPi)).epsilon(1e-7));
}

TEST_CASE("log marginal likelihood is permutation invariant") {
    CounterRng rng(12);
    auto data = random_dataset(rng, 6, 1);
    const auto kernel = unit_kernel(1);
    const double base = log_marginal_likelihood(data, kernel, 0.1);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
    perm.setIdentity();
    std::vector<int> idx{3, 1, 5, 0, 4, 2};
    for (int i = 0; i < 6; ++i) perm.indices()(i) = idx[i];
    Dataset shuffled(perm * data.X, perm * data.y);
    CHECK(log_marginal_likelihood(shuffled, kernel, 0.1) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("scaling targets by c shifts the signal-variance optimum by c^2") {
    CounterRng rng(13);
    Eigen::MatrixXd X(8, 1);
    Eigen::VectorXd y(8);
    for (int i = 0; i < 8; ++i) {
        X(i, 0) = rng.uniform(-1.0, 1.0);
        y(i) = std::sin(3.0 * X(i, 0));  // smooth: keeps the optimum interior
    }
    const Dataset data(X, y);
    Dataset scaled = data;
    scaled.y *= 2.0;  // c = 2, c^2 = 4 = two steps on a power-of-two grid

    auto argmax_on_grid = [&](const Dataset& ds) {
        int best = -100;
        double best_v = -std::numeric_limits<double>::infinity();
        for (int k = -12; k <= 12; ++k) {
            KernelParams kernel = unit_kernel(1);
            kernel.signal_variance = std::pow(2.0, k);
            const double v = log_marginal_likelihood(ds, kernel, 0.0);
            if (v > best_v) {
                best_v = v;
                best = k;
            }
        }
        REQUIRE(best > -12);
        REQUIRE(best < 12);
        return best;
    };
    CHECK(argmax_on_grid(scaled) == argmax_on_grid(data) + 2);
}

TEST_CASE("predictions match the dense-inverse oracle") {
    CounterRng rng(14);
    for (int rep = 0; rep < 10; ++rep) {
        const auto data = random_dataset(rng, 3, 1);
        const auto kernel = unit_kernel(1, 0.8);
        const auto model = fit_gp_gaussian(data, kernel, 0.05, false);
        oracles::DenseGpOracle oracle(data.X, data.y, kernel, 0.05);
        for (int q = 0; q < 5; ++q) {
            Eigen::VectorXd xq(1);
            xq << rng.uniform(-1.5, 1.5);
            const auto pred = predict_gaussian(model, xq, false);
            const auto [m, v] = oracle.predict(xq);
            CHECK(pred.mean == doctest::Approx(m).epsilon(1e-8));
            CHECK(pred.variance == doctest::Approx(v).epsilon(1e-8));
        }
    }
}

TEST_CASE("interpolation and prior reversion") {
    Eigen::MatrixXd X(3, 1);
    X << 0.0, 0.5, 1.0;
    Eigen::VectorXd y(3);
    y << -1.0, 0.3, 2.0;
    const auto model = fit_gp_gaussian(Dataset(X, y), unit_kernel(1), 0.0, false);

    for (int i = 0; i < 3; ++i) {
        const auto pred = predict_gaussian(model, X.row(i).transpose(), false);
        CHECK(pred.mean == doctest::Approx(y(i)).epsilon(1e-6));
        CHECK(pred.variance < 1e-6);
    }

    Eigen::VectorXd far(1);
    far << 1e3;
    const auto pred = predict_gaussian(model, far, false);
    CHECK(std::fabs(pred.mean) < 1e-9);
    CHECK(pred.variance == doctest::Approx(1.0).epsilon(1e-9));
    const auto noisy = predict_gaussian(model, far, true);
    CHECK(noisy.variance == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("predictive variance never exceeds the prior variance") {
    CounterRng rng(15);
    for (int rep = 0; rep < 20; ++rep) {
        const auto data = random_dataset(rng, 6, 2);
        const auto model = fit_gp_gaussian(data, unit_kernel(2), 0.1, false);
        for (int q = 0; q < 10; ++q) {
            Eigen::VectorXd xq(2);
            xq << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
            const auto pred = predict_gaussian(model, xq, true);
            CHECK(pred.variance <= 1.0 + 0.1 + 1e-8 + 1e-12);
        }
    }
}

TEST_CASE("duplicating an observation never increases predictive variance") {
    CounterRng rng(16);
    auto data = random_dataset(rng, 6, 1);
    const auto before = fit_gp_gaussian(data, unit_kernel(1), 0.05, false);
    Dataset extended = data;
    extended.append(data.X.row(2).transpose(), data.y(2));
    const auto after = fit_gp_gaussian(extended, unit_kernel(1), 0.05, false);
    for (int q = 0; q < 50; ++q) {
        Eigen::VectorXd xq(1);
        xq << rng.uniform(-2.0, 2.0);
        CHECK(predict_gaussian(after, xq, false).variance
              <= predict_gaussian(before, xq, false).variance + 1e-9);
    }
}

TEST_CASE("displacing one target moves the mean linearly without bound") {
    Eigen::MatrixXd X(6, 1);
    X << 0.0, 0.2, 0.4, 0.6, 0.8, 1.0;
    Eigen::VectorXd y(6);
    y << 0.1, -0.2, 0.05, 0.3, -0.1, 0.2;
    Eigen::VectorXd xq(1);
    xq << 0.45;

    const auto clean = fit_gp_gaussian(Dataset(X, y), unit_kernel(1, 0.3), 0.01, false);
    const double base = predict_gaussian(clean, xq, false).mean;

    double previous_change = 0.0;
    for (double delta : {10.0, 100.0, 1000.0}) {
        Eigen::VectorXd yd = y;
        yd(2) += delta;
        const auto model = fit_gp_gaussian(Dataset(X, yd), unit_kernel(1, 0.3), 0.01, false);
        const double change = std::fabs(predict_gaussian(model, xq, false).mean - base);
        if (previous_change > 0.0) {
            CHECK(change == doctest::Approx(10.0 * previous_change).epsilon(1e-9));
        }
        previous_change = change;
    }
}

TEST_CASE("hyperparameter optimization recovers a known lengthscale") {
    const double true_ls = 0.2;
    int hits = 0;
    for (int trial = 0; trial < 20; ++trial) {
        CounterRng rng = CounterRng::keyed({900u, static_cast<std::uint64_t>(trial)});
        const int t = 40;
        Eigen::MatrixXd X(t, 1);
        for (int i = 0; i < t; ++i) X(i, 0) = rng.uniform(0.0, 1.0);
        const auto kernel = unit_kernel(1, true_ls);
        const Eigen::MatrixXd K = gram_matrix(X, kernel, 0.0);
        Eigen::LLT<Eigen::MatrixXd> llt(K);
        REQUIRE(llt.info() == Eigen::Success);
        Eigen::VectorXd z(t);
        for (int i = 0; i < t; ++i) z(i) = rng.normal();
        Eigen::VectorXd y = Eigen::MatrixXd(llt.matrixL()) * z;
        for (int i = 0; i < t; ++i) y(i) += 0.1 * rng.normal();

        HyperFitOptions opts;
        opts.seed = stream_key({901u, static_cast<std::uint64_t>(trial)});
        const auto model = fit_gp_gaussian(Dataset(X, y), unit_kernel(1), 1e-2, true, opts);
        if (std::fabs(std::log(model.kernel.lengthscales(0)) - std::log(true_ls)) <= 0.5) ++hits;
    }
    CHECK(hits >= 16);
}
