#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "tjeffreys/error.hpp"
#include "tjeffreys/priors.hpp"
#include "tjeffreys/quadrature.hpp"

using namespace tjeffreys;
using std::numbers::pi;

namespace {

long double bracket_long(long double nu) {
    return boost::math::trigamma(nu / 2) - boost::math::trigamma((nu + 1) / 2) - 2 * (nu + 3) / (nu * (nu + 1) * (nu + 1));
}

// E[(d/dnu log t_nu(z))^2] for one observation at sigma2 = 1.
double nu_score_variance(double nu) {
    using boost::math::digamma;
    const double k = 0.5 * (digamma(0.5 * (nu + 1)) - digamma(0.5 * nu) - 1.0 / nu);
    const double logc = std::lgamma(0.5 * (nu + 1)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * pi);
    auto f = [&](double z) {
        // Beyond 1e100 the remaining mass is below 1e-25 for every ν tested.
        if (z > 1e100) return 0.0;
        const double q = 1.0 + z * z / nu;
        const double score = k - 0.5 * std::log(q) + 0.5 * (nu + 1) / nu * z * z / (nu + z * z);
        return 2.0 * score * score * std::exp(logc - 0.5 * (nu + 1) * std::log(q));
    };
    quadrature::Options opts;
    opts.rel_tol = 1e-12;
    // z = e^u on the tail, which decays only like z^{-(ν+1)} log² z.
    const auto tail = [&](double u) { return f(std::exp(u)) * std::exp(u); };
    return quadrature::integrate_adaptive(f, 0.0, 1.0, opts).value +
           quadrature::integrate_adaptive(tail, 0.0, 230.0, opts).value;
}

}  // namespace

TEST_CASE("fisher information blocks") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(1, 1);
    const auto info = fisher_information(1.0, 1e8, X);
    CHECK(info.beta_block()(0, 0) == doctest::Approx(1.0).epsilon(1e-7));

    Eigen::MatrixXd Z(3, 2);
    Z << 1, 0.5, 1, -1, 1, 2;
    const auto f = fisher_information(2.0, 4.0, Z);
    const Eigen::MatrixXd expect = Z.transpose() * Z * (5.0 / 7.0 / 2.0);
    CHECK((f.beta_block() - expect).norm() < 1e-13);
    CHECK(f.entries.block(0, 2, 2, 2).norm() == 0.0);

    const Eigen::Matrix2d b = scale_dof_information(2.0, 4.0, 3);
    CHECK(b(0, 0) == doctest::Approx(3.0 / (2.0 * 4.0) * 4.0 / 7.0));
    CHECK(b(0, 1) == doctest::Approx(-3.0 / (2.0 * 5.0 * 7.0)));
    CHECK(b(0, 1) == b(1, 0));

    Eigen::MatrixXd rankdef(3, 2);
    rankdef << 1, 2, 1, 2, 1, 2;
    CHECK_THROWS_AS(fisher_information(1.0, 1.0, rankdef), RankDeficiencyError);
    CHECK_THROWS_AS(fisher_information(-1.0, 1.0, Z), DomainError);
}

TEST_CASE("nu entry of the information equals the score variance") {
    for (double nu : {0.3, 1.0, 4.0, 25.0, 120.0}) {
        const double got = scale_dof_information(1.0, nu, 1)(1, 1);
        CHECK(std::abs(got - nu_score_variance(nu)) <= 1e-7 * got);
    }
}

TEST_CASE("bracket: direct branch, series branch and long-double oracle") {
    for (double nu : {1e-3, 0.1, 1.0, 7.3, 39.9, 40.0, 60.0, 150.0, 500.0}) {
        const double ref = static_cast<double>(bracket_long(nu));
        CHECK(nu_prior_bracket(nu) > 0.0);
        CHECK(std::abs(nu_prior_bracket(nu) - ref) <= 1e-9 * ref);
    }
    for (double nu : {1e4, 1e6, 1e9}) CHECK(nu_prior_bracket(nu) * std::pow(nu, 4) == doctest::Approx(6.0).epsilon(1e-3));
}

TEST_CASE("prior log densities") {
    const double ind = nu_prior_log_unnormalized(1.0, PriorKind::IndependenceJeffreys, 1);
    CHECK(std::abs(ind - std::log(0.5 * std::sqrt(pi * pi / 3 - 2))) < 1e-13);
    CHECK(std::abs(std::exp(ind) - 0.5678618084) < 1e-10);
    const double jr = nu_prior_log_unnormalized(1.0, PriorKind::JeffreysRule, 1);
    CHECK(std::abs(jr - (ind + 0.5 * std::log(0.5))) < 1e-13);
    CHECK(std::abs(std::exp(jr) - 0.5678618084 * std::sqrt(0.5)) < 1e-10);

    const double at100 = nu_prior_log_unnormalized(100.0, PriorKind::IndependenceJeffreys, 1);
    CHECK(std::isfinite(at100));
    CHECK(at100 < ind);
    double prev = std::numeric_limits<double>::infinity();
    for (double nu = 10.0; nu <= 1e6; nu *= 10.0) {
        const double v = nu_prior_log_unnormalized(nu, PriorKind::IndependenceJeffreys, 1);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(std::exp(prev) < 1e-11);
    CHECK_THROWS_AS(nu_prior_log_unnormalized(0.0, PriorKind::IndependenceJeffreys, 1), DomainError);
}

TEST_CASE("full prior") {
    Eigen::VectorXd beta = Eigen::VectorXd::Constant(2, 3.0);
    const auto ind = PriorSpec::independence_jeffreys(2);
    const auto jr = PriorSpec::jeffreys_rule(2);
    const double nu_term = nu_prior_log_unnormalized(2.5, ind);
    CHECK(full_prior_log(beta, 1.0, 2.5, ind) == nu_term);
    CHECK(full_prior_log(beta, std::exp(1.0), 2.5, ind) == doctest::Approx(nu_term - 1.0));
    CHECK(full_prior_log(beta, std::exp(1.0), 2.5, jr) == doctest::Approx(nu_prior_log_unnormalized(2.5, jr) - 2.0));
    CHECK(jr.a() == 2.0);
    CHECK(ind.a() == 1.0);
}

TEST_CASE("truncation and custom priors") {
    const auto base = PriorSpec::independence_jeffreys(1);
    const auto cut = base.truncated(2.0);
    CHECK(nu_prior_log_unnormalized(1.5, cut) == -std::numeric_limits<double>::infinity());
    CHECK(nu_prior_log_unnormalized(3.0, cut) == nu_prior_log_unnormalized(3.0, base));
    CHECK(nu_prior_normalizer(cut) < nu_prior_normalizer(base));
    CHECK_THROWS_AS(base.truncated(3.0, 2.0), DomainError);

    const auto flat = PriorSpec::custom(1, 1.0, [](double) { return 0.0; }, "flat");
    CHECK_THROWS_AS(nu_prior_normalizer(flat), DivergenceError);
    const auto box = PriorSpec::custom(1, 1.0, [](double) { return 0.0; }, "box").truncated(1.0, 3.0);
    CHECK(nu_prior_normalizer(box) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("normalizer is finite, stable and scheme independent") {
    for (const auto& spec : {PriorSpec::independence_jeffreys(1), PriorSpec::jeffreys_rule(1), PriorSpec::jeffreys_rule(2)}) {
        const double z6 = nu_prior_normalizer(spec, 1e-6);
        const double z9 = nu_prior_normalizer(spec, 1e-9);
        const double zt = nu_prior_normalizer_tanh_sinh(spec, 1e-9);
        CHECK(std::isfinite(z9));
        CHECK(std::abs(z6 - z9) <= 5e-7 * z9);
        CHECK(std::abs(zt - z9) <= 1e-6 * z9);
    }
    // 40-digit reference values.
    CHECK(nu_prior_normalizer(PriorSpec::independence_jeffreys(1)) == doctest::Approx(2.967580658977).epsilon(1e-9));
    CHECK(nu_prior_normalizer(PriorSpec::jeffreys_rule(1)) == doctest::Approx(2.079495216502).epsilon(1e-9));
    CHECK(nu_prior_normalizer(PriorSpec::jeffreys_rule(2)) == doctest::Approx(1.499224661999).epsilon(1e-9));
}

TEST_CASE("determinant identity") {
    CHECK(jeffreys_determinant_identity_residual(1.0, 1.0, 2) <= 1e-8);
    CHECK(jeffreys_determinant_identity_residual(7.3, 0.2, 5) <= 1e-8);
    const double r1 = jeffreys_determinant_identity_residual(3.1, 0.4, 7);
    const double r2 = jeffreys_determinant_identity_residual(3.1, 4.0, 7);
    CHECK(std::abs(r1 - r2) <= 1e-14);
}
