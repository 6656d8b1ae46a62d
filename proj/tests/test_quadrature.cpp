#include <doctest.h>

#include "test_util.hpp"

#include <cmath>
#include <numbers>

#include "cslprobe/budget.hpp"
#include "cslprobe/errors.hpp"
#include "cslprobe/quadrature.hpp"

using namespace cslprobe;

TEST_SUITE("quadrature") {

TEST_CASE("n-point rule integrates polynomials of degree 2n-1 exactly") {
    for (int n : {1, 2, 5, 10, 20}) {
        const int deg = 2 * n - 1;
        const double v = gauss_legendre([&](double x) { return std::pow(x, deg); }, 0.0, 1.0, n);
        CHECK(v == approx(1.0 / (deg + 1)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(gauss_legendre([](double) { return 1.0; }, 0.0, 1.0, 0), InvalidArgument);
}

TEST_CASE("adaptive rule on smooth and peaked integrands") {
    const auto sine = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(sine.value == approx(2.0).epsilon(1e-13));

    QuadratureOptions o;
    o.rel_tol = 1e-12;
    const auto peak = integrate_adaptive(
        [](double x) { return 1e-3 / (x * x + 1e-6); }, -1.0, 1.0, o);
    CHECK(peak.value == approx(2.0 * std::atan(1e3)).epsilon(1e-11));
    CHECK(peak.panels > 1);

    const auto rev = integrate_adaptive([](double x) { return x; }, 1.0, 0.0);
    CHECK(rev.value == approx(-0.5));
}

TEST_CASE("Gaussian tail against brute-force integration of the density") {
    const double sigma = 1.7;
    for (double x : {0.0, 1.0, 2.0, 3.5, 5.0}) {
        QuadratureOptions o;
        o.rel_tol = 1e-13;
        o.initial_panels = 16;
        const double lo = sigma * x;
        const auto brute = integrate_adaptive(
            [&](double y) {
                return std::exp(-y * y / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * std::numbers::pi));
            },
            lo, lo + 40.0 * sigma, o);
        CHECK(std::abs(gaussian_tail(lo, sigma) - brute.value) < 1e-10);
    }
    CHECK(gaussian_tail(0.0, 3.0) == 0.5);
}

TEST_CASE("panel budget exhaustion is reported") {
    QuadratureOptions o;
    o.rel_tol = 1e-14;
    o.max_panels = 4;
    CHECK_THROWS_AS(integrate_adaptive([](double x) { return std::sin(1e4 * x); }, 0.0, 10.0, o),
                    ConvergenceError);
}

}  // TEST_SUITE
