#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "orbo/special.hpp"

using namespace orbo;

TEST_CASE("normal pdf/cdf basics") {
    CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
    CHECK(normal_cdf(-40.0) == doctest::Approx(0.0));
}

TEST_CASE("incomplete beta against quadrature") {
    // integrands stay smooth on [0, x] for a >= 1
    for (auto [a, b] : {std::pair{1.0, 0.5}, {2.0, 0.5}, {2.0, 3.0}, {5.0, 1.5}}) {
        for (double x : {0.05, 0.3, 0.5, 0.8, 0.97}) {
            auto density = [a = a, b = b](double u) {
                return std::pow(u, a - 1.0) * std::pow(1.0 - u, b - 1.0)
                       / std::exp(log_beta(a, b));
            };
            const double quad = oracles::simpson(density, 0.0, x, 200000);
            CHECK(incbeta(a, b, x) == doctest::Approx(quad).epsilon(1e-6));
        }
    }
    // arcsine law closed form covers the doubly singular case
    for (double x : {0.05, 0.3, 0.5, 0.8, 0.97}) {
        CHECK(incbeta(0.5, 0.5, x)
              == doctest::Approx(2.0 / kPi * std::asin(std::sqrt(x))).epsilon(1e-12));
    }
    CHECK(incbeta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incbeta(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("student t cdf matches quadrature of the pdf") {
    for (double dof : {2.5, 4.0, 10.0}) {
        for (double z : {-3.0, -1.0, -0.2, 0.0, 0.7, 2.0, 5.0}) {
            auto pdf = [dof](double u) { return student_t_pdf(u, dof); };
            const double quad = 0.5 + oracles::simpson(pdf, 0.0, z, 40000);
            CHECK(student_t_cdf(z, dof) == doctest::Approx(quad).epsilon(1e-8));
        }
    }
}

TEST_CASE("student t pdf integrates to one") {
    for (double dof : {3.0, 4.0, 7.0}) {
        auto pdf = [dof](double u) { return student_t_pdf(u, dof); };
        const double mass = oracles::simpson(pdf, -300.0, 300.0, 400000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("student t quantile inverts the cdf") {
    for (double dof : {2.5, 4.0, 30.0}) {
        for (double p : {0.01, 0.05, 0.25, 0.5, 0.9, 0.95, 0.999}) {
            const double q = student_t_quantile(p, dof);
            CHECK(student_t_cdf(q, dof) == doctest::Approx(p).epsilon(1e-10));
        }
    }
    // classic value: the 95th percentile of t with 4 dof
    CHECK(student_t_quantile(0.95, 4.0) == doctest::Approx(2.131846786).epsilon(1e-8));
    CHECK(student_t_quantile(0.05, 4.0) == doctest::Approx(-2.131846786).epsilon(1e-8));
}

TEST_CASE("student t cdf approaches the normal for large dof") {
    for (double z : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
        CHECK(student_t_cdf(z, 1e7) == doctest::Approx(normal_cdf(z)).epsilon(1e-6));
    }
}
