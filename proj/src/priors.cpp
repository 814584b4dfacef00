#include "tjeffreys/priors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>

#include "tjeffreys/error.hpp"
#include "tjeffreys/quadrature.hpp"
#include "tjeffreys/specfun.hpp"

namespace tjeffreys {

namespace detail {
struct NormalizerMemo {
    std::shared_mutex mutex;
    std::map<double, double> by_tolerance;
};
}  // namespace detail

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kClampWindow = 1e-12;

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

double independence_log_factor(double nu) {
    const double bracket = nu_prior_bracket(nu);
    if (bracket <= 0.0) {
        if (bracket > -kClampWindow) return kNegInf;
        throw Error("nu prior bracket is negative at nu=" + std::to_string(nu));
    }
    // log[√(ν/(ν+3)) · √bracket]
    return 0.5 * (std::log(nu) - std::log(nu + 3.0) + std::log(bracket));
}

enum class Route { GaussKronrod, TanhSinh };

double integrate_prior(const PriorSpec& spec, double quad_tol, Route route) {
    if (!(quad_tol > 0.0)) throw DomainError("quad_tol must be positive");
    const auto density = [&spec](double nu) {
        if (!(nu > 0.0) || !std::isfinite(nu)) return 0.0;
        return std::exp(nu_prior_log_unnormalized(nu, spec));
    };
    quadrature::Options opts;
    opts.rel_tol = quad_tol;
    opts.abs_tol = 1e-300;
    opts.max_subdivisions = 4000;
    opts.max_levels = 14;

    const double lower = spec.nu_lower();
    const double upper = spec.nu_upper();
    double total = 0.0;

    const auto run = [&](const quadrature::Integrand& f, double a, double b) {
        const quadrature::Result r = route == Route::GaussKronrod ? quadrature::integrate_adaptive(f, a, b, opts)
                                                                  : quadrature::integrate_tanh_sinh(f, a, b, opts);
        if (!r.converged || !std::isfinite(r.value)) {
            throw DivergenceError("nu prior normalizer failed to stabilize for prior '" + spec.label() +
                                  "' (the nu density may not be integrable)");
        }
        total += r.value;
    };

    // Head: (lower, min(upper, 1)].
    if (lower < 1.0) {
        const double hi = std::min(upper, 1.0);
        if (route == Route::GaussKronrod) {
            run([&](double s) { return 2.0 * s * density(s * s); }, std::sqrt(lower), std::sqrt(hi));
        } else {
            run(density, lower, hi);
        }
    }
    // Tail: [max(lower, 1), upper) with u = 1/ν.
    if (upper > 1.0) {
        const double lo = std::max(lower, 1.0);
        const double u_lo = std::isinf(upper) ? 0.0 : 1.0 / upper;
        run([&](double u) { return u > 0.0 ? density(1.0 / u) / (u * u) : 0.0; }, u_lo, 1.0 / lo);
    }
    if (!(total > 0.0)) {
        throw DivergenceError("nu prior for '" + spec.label() + "' has no mass on its support");
    }
    return total;
}

}  // namespace

std::string_view to_string(PriorKind kind) {
    switch (kind) {
        case PriorKind::JeffreysRule:
            return "jeffreys-rule";
        case PriorKind::IndependenceJeffreys:
            return "independence";
        case PriorKind::CustomNu:
            return "custom";
    }
    return "unknown";
}

PriorSpec::PriorSpec(PriorKind kind, int p, double a)
    : kind_(kind), p_(p), a_(a), label_(to_string(kind)), memo_(std::make_shared<detail::NormalizerMemo>()) {
    if (p < 1) throw DomainError("prior: p must be >= 1");
}

PriorSpec PriorSpec::jeffreys_rule(int p) { return PriorSpec(PriorKind::JeffreysRule, p, 1.0 + 0.5 * p); }

PriorSpec PriorSpec::independence_jeffreys(int p) { return PriorSpec(PriorKind::IndependenceJeffreys, p, 1.0); }

PriorSpec PriorSpec::custom(int p, double a, NuLogDensity log_density, std::string label) {
    if (!log_density) throw DomainError("custom prior requires a nu density evaluator");
    if (!std::isfinite(a)) throw DomainError("custom prior: exponent a must be finite");
    PriorSpec spec(PriorKind::CustomNu, p, a);
    spec.custom_ = std::move(log_density);
    spec.label_ = std::move(label);
    return spec;
}

PriorSpec PriorSpec::truncated(double lower, double upper) const {
    if (!(lower >= 0.0) || !(upper > lower)) throw DomainError("prior truncation: need 0 <= lower < upper");
    PriorSpec copy = *this;
    copy.nu_lower_ = std::max(nu_lower_, lower);
    copy.nu_upper_ = std::min(nu_upper_, upper);
    if (!(copy.nu_upper_ > copy.nu_lower_)) throw DomainError("prior truncation leaves an empty support");
    copy.memo_ = std::make_shared<detail::NormalizerMemo>();
    return copy;
}

Eigen::Matrix2d scale_dof_information(double sigma2, double nu, int n) {
    require_positive(sigma2, "sigma2");
    require_positive(nu, "nu");
    if (n < 1) throw DomainError("n must be >= 1");
    const double nn = n;
    Eigen::Matrix2d block;
    block(0, 0) = nn / (2.0 * sigma2 * sigma2) * (nu / (nu + 3.0));
    block(0, 1) = -nn / sigma2 / ((nu + 1.0) * (nu + 3.0));
    block(1, 0) = block(0, 1);
    block(1, 1) = 0.25 * nn *
                  (specfun::trigamma_half_step_difference(0.5 * nu) -
                   2.0 * (nu + 5.0) / (nu * (nu + 1.0) * (nu + 3.0)));
    return block;
}

FisherMatrix fisher_information(double sigma2, double nu, const Eigen::MatrixXd& X) {
    require_positive(sigma2, "sigma2");
    require_positive(nu, "nu");
    const int n = static_cast<int>(X.rows());
    const int p = static_cast<int>(X.cols());
    if (n < 1 || p < 1) throw DomainError("design matrix must be non-empty");
    if (!X.allFinite()) throw DomainError("design matrix has non-finite entries");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p) throw RankDeficiencyError("X'X is singular: design matrix is rank deficient");

    FisherMatrix info;
    info.p = p;
    info.entries = Eigen::MatrixXd::Zero(p + 2, p + 2);
    info.entries.topLeftCorner(p, p) = (X.transpose() * X) * ((nu + 1.0) / (nu + 3.0) / sigma2);
    info.entries.bottomRightCorner(2, 2) = scale_dof_information(sigma2, nu, n);
    return info;
}

double nu_prior_bracket(double nu) {
    require_positive(nu, "nu");
    if (nu < 40.0) {
        return specfun::trigamma_half_step_difference(0.5 * nu) - 2.0 * (nu + 3.0) / (nu * (nu + 1.0) * (nu + 1.0));
    }
    // 6t⁴ - 12t⁵ + 14t⁶ - ... with t = 1/ν, through t¹⁹.
    constexpr double coeffs[] = {6,  -12, 14,    -12, 22,       -60, 30,       276,
                                 38, -4188, 46, 76404, 54, -1859196, 62, 57641172};
    const double t = 1.0 / nu;
    double poly = 0.0;
    for (int k = static_cast<int>(std::size(coeffs)) - 1; k >= 0; --k) poly = poly * t + coeffs[k];
    const double t2 = t * t;
    return poly * t2 * t2;
}

double nu_prior_log_unnormalized(double nu, PriorKind kind, int p) {
    require_positive(nu, "nu");
    switch (kind) {
        case PriorKind::IndependenceJeffreys:
            return independence_log_factor(nu);
        case PriorKind::JeffreysRule:
            if (p < 1) throw DomainError("p must be >= 1");
            return independence_log_factor(nu) + 0.5 * p * std::log1p(-2.0 / (nu + 3.0));
        case PriorKind::CustomNu:
            break;
    }
    throw DomainError("custom priors need a PriorSpec carrying the nu density");
}

double nu_prior_log_unnormalized(double nu, const PriorSpec& spec) {
    require_positive(nu, "nu");
    if (nu <= spec.nu_lower() || nu >= spec.nu_upper()) return kNegInf;
    if (spec.kind() == PriorKind::CustomNu) {
        const double v = spec.custom_log_density()(nu);
        return std::isnan(v) ? kNegInf : v;
    }
    return nu_prior_log_unnormalized(nu, spec.kind(), spec.p());
}

double full_prior_log(const Eigen::VectorXd& /*beta*/, double sigma2, double nu, const PriorSpec& spec) {
    require_positive(sigma2, "sigma2");
    return -spec.a() * std::log(sigma2) + nu_prior_log_unnormalized(nu, spec);
}

double nu_prior_normalizer(const PriorSpec& spec, double quad_tol) {
    auto& memo = spec.memo();
    {
        std::shared_lock lock(memo.mutex);
        if (auto it = memo.by_tolerance.find(quad_tol); it != memo.by_tolerance.end()) return it->second;
    }
    std::unique_lock lock(memo.mutex);
    if (auto it = memo.by_tolerance.find(quad_tol); it != memo.by_tolerance.end()) return it->second;
    const double value = integrate_prior(spec, quad_tol, Route::GaussKronrod);
    memo.by_tolerance.emplace(quad_tol, value);
    return value;
}

double nu_prior_normalizer_tanh_sinh(const PriorSpec& spec, double quad_tol) {
    return integrate_prior(spec, quad_tol, Route::TanhSinh);
}

double jeffreys_determinant_identity_residual(double nu, double sigma2, int n) {
    const Eigen::Matrix2d block = scale_dof_information(sigma2, nu, n);
    const double det = block(0, 0) * block(1, 1) - block(0, 1) * block(1, 0);
    if (!(det > 0.0)) throw Error("scale/dof information block is not positive definite");
    const double prior_factor = std::exp(nu_prior_log_unnormalized(nu, PriorKind::IndependenceJeffreys, 1)) / sigma2;
    const double ratio = std::sqrt(det) / prior_factor;
    return std::abs(ratio - n / (2.0 * std::numbers::sqrt2));
}

}  // namespace tjeffreys
