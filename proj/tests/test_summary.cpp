#include <cmath>
#include <random>

#include "doctest.h"
#include "tjeffreys/summary.hpp"

using namespace tjeffreys;

TEST_CASE("constant series") {
    std::vector<double> c(500, 2.5);
    const auto s = summarize_series("x", c);
    CHECK(s.mean == 2.5);
    CHECK(s.sd == 0.0);
    CHECK(s.lower == 2.5);
    CHECK(s.upper == 2.5);
}

TEST_CASE("iid draws have ESS near their length") {
    std::mt19937_64 gen(17);
    std::normal_distribution<double> d;
    std::vector<double> x(100000);
    for (auto& v : x) v = d(gen);
    const double ess = effective_sample_size(x);
    CHECK(std::abs(ess - 100000.0) <= 10000.0);
    const auto s = summarize_series("z", x);
    CHECK(std::abs(s.lower + 1.96) < 0.05);
    CHECK(std::abs(s.upper - 1.96) < 0.05);
}

TEST_CASE("autocorrelated draws have smaller ESS") {
    std::mt19937_64 gen(18);
    std::normal_distribution<double> d;
    std::vector<double> x(50000);
    double prev = 0.0;
    const double rho = 0.9;
    for (auto& v : x) {
        prev = rho * prev + std::sqrt(1 - rho * rho) * d(gen);
        v = prev;
    }
    // AR(1) integrated autocorrelation time is (1+ρ)/(1−ρ) = 19.
    const double ess = effective_sample_size(x);
    CHECK(ess == doctest::Approx(50000.0 / 19.0).epsilon(0.2));
}

TEST_CASE("interval order statistics") {
    std::vector<double> x;
    for (int i = 1; i <= 200; ++i) x.push_back(i);
    const auto s = summarize_series("x", x);
    CHECK(s.lower == 5.0);
    CHECK(s.upper == 195.0);
}

TEST_CASE("trace columns") {
    Trace t;
    t.p = 2;
    t.draws.push_back({Eigen::Vector2d(1, 2), 3, 4});
    t.draws.push_back({Eigen::Vector2d(5, 6), 7, 8});
    t.iterations = {0, 1};
    CHECK(trace_column(t, "beta_2") == std::vector<double>{2, 6});
    CHECK(trace_column(t, "nu") == std::vector<double>{4, 8});
    const Summary s = summarize(t);
    CHECK(s.get("sigma2").mean == 5.0);
    CHECK(s.parameters.size() == 4);
}
