#pragma once

// Objective priors for Student-t linear regression. Every prior handled here
// factorizes as π(β, σ², ν) ∝ (σ²)^(-a) π(ν); PriorSpec carries the exponent a
// and the ν factor.

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>

namespace tjeffreys {

enum class PriorKind { JeffreysRule, IndependenceJeffreys, CustomNu };

std::string_view to_string(PriorKind kind);

/// Log of a user ν-density, unnormalized; -inf where the density is zero.
using NuLogDensity = std::function<double(double)>;

namespace detail {
struct NormalizerMemo;
}

class PriorSpec {
public:
    /// a = 1 + p/2
    static PriorSpec jeffreys_rule(int p);
    /// a = 1
    static PriorSpec independence_jeffreys(int p);
    static PriorSpec custom(int p, double a, NuLogDensity log_density, std::string label = "custom");

    PriorKind kind() const { return kind_; }
    double a() const { return a_; }
    int p() const { return p_; }
    const std::string& label() const { return label_; }

    /// Support of π(ν) is (nu_lower, nu_upper); the built-in priors use (0, ∞).
    double nu_lower() const { return nu_lower_; }
    double nu_upper() const { return nu_upper_; }

    /// Copy with the ν support intersected with (lower, upper). The copy gets
    /// its own normalizer memo.
    PriorSpec truncated(double lower, double upper = std::numeric_limits<double>::infinity()) const;

    /// Evaluator for CustomNu; empty otherwise.
    const NuLogDensity& custom_log_density() const { return custom_; }

    detail::NormalizerMemo& memo() const { return *memo_; }

private:
    PriorSpec(PriorKind kind, int p, double a);

    PriorKind kind_;
    int p_;
    double a_;
    double nu_lower_ = 0.0;
    double nu_upper_ = std::numeric_limits<double>::infinity();
    NuLogDensity custom_;
    std::string label_;
    std::shared_ptr<detail::NormalizerMemo> memo_;
};

/// Expected information of (β, σ², ν). Index layout: β in [0, p), σ² at p, ν at p + 1.
struct FisherMatrix {
    Eigen::MatrixXd entries;
    int p = 0;

    Eigen::MatrixXd beta_block() const { return entries.topLeftCorner(p, p); }
    Eigen::Matrix2d scale_dof_block() const { return entries.bottomRightCorner(2, 2); }
};

FisherMatrix fisher_information(double sigma2, double nu, const Eigen::MatrixXd& X);

/// The (σ², ν) block of the information for n observations; independent of X.
Eigen::Matrix2d scale_dof_information(double sigma2, double nu, int n);

/// Ψ'(ν/2) - Ψ'((ν+1)/2) - 2(ν+3)/(ν(ν+1)²), the quantity under the square root
/// of both priors. Uses a cancellation-free series for ν >= 40.
double nu_prior_bracket(double nu);

double nu_prior_log_unnormalized(double nu, PriorKind kind, int p);
double nu_prior_log_unnormalized(double nu, const PriorSpec& spec);

/// -a log σ² + log π(ν); constant in β.
double full_prior_log(const Eigen::VectorXd& beta, double sigma2, double nu, const PriorSpec& spec);

/// ∫ π(ν) dν by adaptive Gauss–Kronrod: ν = s² on (0, 1], u = 1/ν on the tail.
/// Memoized per spec and tolerance. Throws DivergenceError when π(ν) is not integrable.
double nu_prior_normalizer(const PriorSpec& spec, double quad_tol = 1e-9);

/// Same integral by the tanh-sinh rule with no substitution on (0, 1]; not memoized.
double nu_prior_normalizer_tanh_sinh(const PriorSpec& spec, double quad_tol = 1e-9);

/// |√det(scale_dof_information) / ((1/σ²)·exp(log π_I(ν))) - n/(2√2)|.
double jeffreys_determinant_identity_residual(double nu, double sigma2, int n);

}  // namespace tjeffreys
