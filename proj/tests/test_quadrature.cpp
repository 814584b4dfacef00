#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tjeffreys/quadrature.hpp"

using namespace tjeffreys::quadrature;
using std::numbers::pi;

TEST_CASE("gauss-kronrod on smooth and singular integrands") {
    auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, pi);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) < 1e-13);

    r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) < 1e-9);

    r = integrate_adaptive([](double x) { return std::log(x); }, 0.0, 1.0);
    CHECK(std::abs(r.value + 1.0) < 1e-9);
}

TEST_CASE("semi-infinite mapping") {
    auto r = integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0);
    CHECK(std::abs(r.value - 1.0) < 1e-12);
    r = integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); }, 0.0);
    CHECK(std::abs(r.value - pi / 2) < 1e-10);
}

TEST_CASE("tanh-sinh agrees with closed forms") {
    auto r = integrate_tanh_sinh([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(std::abs(r.value - (std::exp(1.0) - 1.0)) < 1e-13);
    r = integrate_tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(std::abs(r.value - 2.0) < 1e-10);
    r = integrate_tanh_sinh([](double x) { return std::sqrt(1.0 - x * x); }, -1.0, 1.0);
    CHECK(std::abs(r.value - pi / 2) < 1e-12);
}

TEST_CASE("non-convergence is reported") {
    Options opts;
    opts.max_subdivisions = 5;
    opts.rel_tol = 1e-15;
    const auto r = integrate_adaptive([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, opts);
    CHECK_FALSE(r.converged);
}
