#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "orbo/kernels.hpp"
#include "orbo/rng.hpp"

using namespace orbo;

namespace {

KernelParams matern(Eigen::VectorXd ls, double sv = 1.0) {
    KernelParams p;
    p.lengthscales = std::move(ls);
    p.signal_variance = sv;
    return p;
}

}  // namespace

TEST_CASE("ard distance") {
    Eigen::VectorXd x(2), xp(2);
    x << 0.3, -1.0;
    xp = x;
    auto p = matern(Eigen::Vector2d(0.7, 2.0));
    CHECK(ard_distance(x, xp, p) == 0.0);

    auto p1 = matern(Eigen::VectorXd::Ones(1));
    Eigen::VectorXd a(1), b(1);
    a << 0.0;
    b << 3.0;
    CHECK(ard_distance(a, b, p1) == doctest::Approx(3.0).epsilon(1e-15));

    auto p2 = matern(Eigen::Vector2d(1.0, 2.0));
    Eigen::VectorXd u(2), v(2);
    u << 0.0, 0.0;
    v << 1.0, 2.0;
    CHECK(ard_distance(u, v, p2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    Eigen::VectorXd w(3);
    w.setZero();
    CHECK_THROWS_AS(ard_distance(u, w, p2), std::invalid_argument);
    CHECK_THROWS_AS(ard_distance(w, w, p2), std::invalid_argument);
}

TEST_CASE("kernel values") {
    auto p = matern(Eigen::VectorXd::Ones(1));
    CHECK(kernel_of_distance(0.0, p) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kernel_of_distance(1.0, p)
          == doctest::Approx((7.0 / 3.0) * std::exp(-1.0)).epsilon(1e-14));

    KernelParams rq = p;
    rq.family = KernelFamily::RationalQuadratic;
    rq.rq_alpha = 2.0;
    CHECK(kernel_of_distance(0.0, rq) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kernel_of_distance(2.0, rq) == doctest::Approx(0.25).epsilon(1e-14));

    // amplitude scales both families
    p.signal_variance = 3.5;
    rq.signal_variance = 3.5;
    CHECK(kernel_of_distance(0.0, p) == doctest::Approx(3.5));
    CHECK(kernel_of_distance(0.0, rq) == doctest::Approx(3.5));
}

TEST_CASE("matern52 decays strictly on a distance grid") {
    auto p = matern(Eigen::VectorXd::Ones(1));
    double prev = kernel_of_distance(1e-6, p);
    for (int i = 1; i <= 200; ++i) {
        const double r = 1e-6 + 0.1 * i;
        const double v = kernel_of_distance(r, p);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("gram matrix basics") {
    auto p = matern(Eigen::VectorXd::Ones(1));
    Eigen::MatrixXd X1(1, 1);
    X1 << 0.4;
    const Eigen::MatrixXd K1 = gram_matrix(X1, p, 0.0);
    CHECK(K1(0, 0) == doctest::Approx(1.0 + 1e-8).epsilon(1e-12));

    Eigen::MatrixXd X2(2, 1);
    X2 << 0.4, 0.4;  // duplicate rows
    const Eigen::MatrixXd K2 = gram_matrix(X2, p, 0.1);
    CHECK(K2(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(K2(1, 0) == K2(0, 1));
    CHECK(K2(0, 0) == doctest::Approx(1.1 + 1e-8).epsilon(1e-12));
}

TEST_CASE("gram matrix is symmetric and positive definite on random inputs") {
    CounterRng rng(2024);
    for (int rep = 0; rep < 100; ++rep) {
        const int t = 2 + static_cast<int>(rng.bounded(8));
        const int d = 1 + static_cast<int>(rng.bounded(3));
        Eigen::MatrixXd X(t, d);
        for (int i = 0; i < t; ++i)
            for (int j = 0; j < d; ++j) X(i, j) = rng.uniform(-2.0, 2.0);
        KernelParams p;
        p.lengthscales = Eigen::VectorXd::Constant(d, 0.5);
        p.signal_variance = 1.7;
        p.family = rep % 2 == 0 ? KernelFamily::Matern52 : KernelFamily::RationalQuadratic;
        const Eigen::MatrixXd K = gram_matrix(X, p, 0.0);
        CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::LLT<Eigen::MatrixXd> llt(K);
        CHECK(llt.info() == Eigen::Success);
    }
}
