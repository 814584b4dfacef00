#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "tjeffreys/error.hpp"
#include "tjeffreys/quadrature.hpp"
#include "tjeffreys/regression.hpp"

using namespace tjeffreys;
using std::numbers::pi;

namespace {

Dataset random_dataset(int n, int p, std::mt19937_64& gen) {
    std::normal_distribution<double> d;
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        for (int j = 1; j < p; ++j) X(i, j) = d(gen);
        y[i] = 0.5 + 2.0 * d(gen);
    }
    return Dataset(y, X);
}

MixingVector random_lambda(int n, std::mt19937_64& gen) {
    std::gamma_distribution<double> g(1.5, 1.0);
    Eigen::VectorXd l(n);
    for (int i = 0; i < n; ++i) l[i] = g(gen) + 1e-3;
    return MixingVector(l);
}

quadrature::Options tight() {
    quadrature::Options o;
    o.rel_tol = 1e-12;
    return o;
}

}  // namespace

TEST_CASE("dataset validation") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(2, 2);
    CHECK_THROWS_AS(Dataset(Eigen::VectorXd::Ones(2), X), ValidationError);
    Eigen::MatrixXd Y = Eigen::MatrixXd::Ones(3, 2);
    CHECK_THROWS_AS(Dataset(Eigen::VectorXd::Ones(3), Y), RankDeficiencyError);
    CHECK_THROWS_AS(Dataset(Eigen::VectorXd::Ones(4), Eigen::MatrixXd::Ones(3, 1)), ValidationError);
    Eigen::VectorXd bad = Eigen::VectorXd::Ones(3);
    bad[1] = std::nan("");
    CHECK_THROWS_AS(Dataset(bad, Eigen::MatrixXd::Ones(3, 1)), ValidationError);
    CHECK_THROWS_AS(MixingVector(Eigen::VectorXd::Zero(2)), DomainError);
}

TEST_CASE("weighted regression") {
    Dataset d(Eigen::Vector3d(1, 2, 3), Eigen::MatrixXd::Ones(3, 1));
    auto w = weighted_regression(d, MixingVector::ones(3));
    CHECK(w.b[0] == doctest::Approx(2.0));
    CHECK(w.s2 == doctest::Approx(2.0));

    auto scaled = weighted_regression(d, MixingVector(Eigen::VectorXd::Constant(3, 4.0)));
    CHECK(scaled.b[0] == doctest::Approx(2.0));
    CHECK(scaled.s2 == doctest::Approx(8.0));
    CHECK(scaled.A(0, 0) == doctest::Approx(4.0 * w.A(0, 0)));

    std::mt19937_64 gen(2);
    for (int rep = 0; rep < 50; ++rep) {
        const Dataset data = random_dataset(6, 2, gen);
        const MixingVector lam = random_lambda(6, gen);
        const auto wls = weighted_regression(data, lam);
        const Eigen::MatrixXd D = lam.values().asDiagonal();
        const Eigen::MatrixXd A = data.X().transpose() * D * data.X();
        const Eigen::VectorXd Xy = data.X().transpose() * D * data.y();
        const double naive = data.y().dot(D * data.y()) - Xy.dot(A.inverse() * Xy);
        CHECK(std::abs(wls.s2 - naive) <= 1e-10 * naive);
        CHECK((wls.b - A.inverse() * Xy).norm() <= 1e-10 * (1 + wls.b.norm()));
        CHECK((wls.R.transpose() * wls.R - A).norm() <= 1e-10 * A.norm());
    }
}

TEST_CASE("student-t likelihood") {
    Dataset zero(Eigen::Vector2d(0.0, 0.0), Eigen::MatrixXd::Ones(2, 1));
    Eigen::VectorXd b0 = Eigen::VectorXd::Zero(1);
    CHECK(student_t_loglik(b0, 1.0, 1.0, zero) == doctest::Approx(2.0 * std::log(1.0 / pi)).epsilon(1e-14));

    std::mt19937_64 gen(4);
    const Dataset data = random_dataset(8, 2, gen);
    Eigen::VectorXd beta(2);
    beta << 0.3, -0.2;
    CHECK(std::abs(student_t_loglik(beta, 1.7, 1e6, data) - normal_loglik(beta, 1.7, data)) < 1e-4);

    const double c = 3.0;
    Dataset scaled(c * data.y(), data.X());
    const double lhs = student_t_loglik(c * beta, c * c * 1.7, 2.5, scaled);
    const double rhs = student_t_loglik(beta, 1.7, 2.5, data) - data.n() * std::log(c);
    CHECK(std::abs(lhs - rhs) < 1e-12);

    // Per-observation scale-mixture representation.
    const double sigma2 = 0.8, nu = 2.3;
    const Eigen::VectorXd r = residuals(beta, data);
    double mix = 0.0;
    for (int i = 0; i < data.n(); ++i) {
        auto f = [&](double l) {
            return std::exp(0.5 * std::log(l / (2 * pi * sigma2)) - 0.5 * l * r[i] * r[i] / sigma2 + mixing_density_log(l, nu));
        };
        mix += std::log(quadrature::integrate_semi_infinite(f, 0.0, tight()).value);
    }
    CHECK(std::abs(student_t_loglik(beta, sigma2, nu, data) - mix) < 1e-8);
}

TEST_CASE("mixing density") {
    CHECK(mixing_density_log(0.7, 2.0) == doctest::Approx(-0.7).epsilon(1e-14));
    for (double nu : {0.5, 1.0, 4.0, 50.0}) {
        auto dens = [&](double l) { return std::exp(mixing_density_log(l, nu)); };
        auto mean = [&](double l) { return l * std::exp(mixing_density_log(l, nu)); };
        CHECK(std::abs(quadrature::integrate_semi_infinite(dens, 0.0, tight()).value - 1.0) < 1e-10);
        CHECK(std::abs(quadrature::integrate_semi_infinite(mean, 0.0, tight()).value - 1.0) < 1e-8);
    }
}

TEST_CASE("augmented density integrates to the marginal") {
    std::mt19937_64 gen(8);
    const Dataset data = random_dataset(3, 1, gen);
    const auto spec = PriorSpec::independence_jeffreys(1);
    Eigen::VectorXd beta = Eigen::VectorXd::Constant(1, 0.4);
    const double sigma2 = 1.3, nu = 3.7;
    const MixingVector base = MixingVector::ones(3);
    const double f0 = augmented_joint_logdensity(beta, sigma2, nu, base, data, spec);

    // The density is a product over λ_i, so the n-fold integral splits.
    double total = f0;
    for (int i = 0; i < 3; ++i) {
        auto slice = [&](double t) {
            Eigen::VectorXd l = base.values();
            l[i] = t;
            return std::exp(augmented_joint_logdensity(beta, sigma2, nu, MixingVector(l), data, spec) - f0);
        };
        total += std::log(quadrature::integrate_semi_infinite(slice, 0.0, tight()).value);
    }
    const double target = student_t_loglik(beta, sigma2, nu, data) + full_prior_log(beta, sigma2, nu, spec);
    CHECK(std::abs(total - target) <= 1e-6 * std::abs(target));
}

TEST_CASE("completed square and permutation invariance") {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> d;
    for (int rep = 0; rep < 200; ++rep) {
        const Dataset data = random_dataset(7, 3, gen);
        const MixingVector lam = random_lambda(7, gen);
        Eigen::VectorXd beta(3);
        for (int j = 0; j < 3; ++j) beta[j] = d(gen);
        const auto w = weighted_regression(data, lam);
        const double lhs = weighted_residual_sum_squares(beta, lam, data);
        const double rhs = (beta - w.b).dot(w.A * (beta - w.b)) + w.s2;
        CHECK(std::abs(lhs - rhs) <= 1e-10 * lhs);
    }

    const Dataset data = random_dataset(6, 2, gen);
    const MixingVector lam = random_lambda(6, gen);
    std::vector<int> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    Eigen::VectorXd y(6), l(6);
    Eigen::MatrixXd X(6, 2);
    for (int i = 0; i < 6; ++i) {
        y[i] = data.y()[perm[i]];
        X.row(i) = data.X().row(perm[i]);
        l[i] = lam[perm[i]];
    }
    const auto spec = PriorSpec::independence_jeffreys(2);
    Eigen::VectorXd beta(2);
    beta << 0.1, 0.9;
    const double a = augmented_joint_logdensity(beta, 0.9, 4.0, lam, data, spec);
    const double b = augmented_joint_logdensity(beta, 0.9, 4.0, MixingVector(l), Dataset(y, X), spec);
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
}
