#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "discovery/gaussian.hpp"
#include "discovery/quadrature.hpp"

#include <cmath>

using namespace discovery;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    const QuadRule r5 = gauss_legendre(5);
    auto moment = [&](int k) {
        double s = 0.0;
        for (std::size_t i = 0; i < r5.nodes.size(); ++i) {
            s += r5.weights[i] * std::pow(r5.nodes[i], k);
        }
        return s;
    };
    for (int k = 0; k <= 9; ++k) {
        const double want = (k % 2 == 0) ? 2.0 / (k + 1.0) : 0.0;
        CHECK(moment(k) == doctest::Approx(want).epsilon(1e-13).scale(1.0));
    }
}

TEST_CASE("gauss-hermite moments at 101 nodes") {
    const QuadRule gh = gauss_hermite(101);
    REQUIRE(gh.nodes.size() == 101);
    double m0 = 0.0, m2 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
        m0 += gh.weights[i];
        m2 += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
        m4 += gh.weights[i] * std::pow(gh.nodes[i], 4);
    }
    CHECK(m0 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(m4 == doctest::Approx(0.75 * std::sqrt(M_PI)).epsilon(1e-13));
    // symmetric rule
    CHECK(gh.nodes[50] == 0.0);
    for (int i = 0; i < 50; ++i) {
        CHECK(gh.nodes[i] == doctest::Approx(-gh.nodes[100 - i]).epsilon(1e-13));
        CHECK(gh.weights[i] == doctest::Approx(gh.weights[100 - i]).epsilon(1e-12));
    }
}

TEST_CASE("normal expectation of Phi(a + b X) has the known closed form") {
    // E Phi(a + bX) = Phi(a / sqrt(1 + b^2)) for X standard normal.
    const QuadRule gh = gauss_hermite(101);
    for (double a : {-1.2, 0.0, 0.7}) {
        for (double b : {0.3, 1.0, 2.5}) {
            const double got =
                expect_normal_gh([&](double x) { return std_normal_cdf(a + b * x); }, 0.0, 1.0,
                                 gh);
            CHECK(got ==
                  doctest::Approx(std_normal_cdf(a / std::sqrt(1.0 + b * b))).epsilon(1e-12));
        }
    }
}

TEST_CASE("adaptive quadrature hits tight tolerances on smooth integrands") {
    const double got =
        integrate_adaptive([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-13);
    CHECK(got == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    const double narrow = integrate_adaptive(
        [](double x) { return std_normal_pdf((x - 0.3) / 0.01) / 0.01; }, -1.0, 1.0, 1e-12);
    CHECK(narrow == doctest::Approx(1.0).epsilon(1e-10));
}
