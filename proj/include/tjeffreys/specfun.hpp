#pragma once

namespace tjeffreys::specfun {

struct Accuracy {
    double abs_tol = 1e-12;
    int max_terms = 1000;
};

/// ln Γ(x) for x > 0. Throws DomainError for x <= 0 or non-finite x.
double log_gamma(double x);

/// Ψ'(x) for x > 0: recurrence up to x >= 10, then the asymptotic
/// Bernoulli series.
double trigamma(double x);

/// Ψ'(x) - Ψ'(x + 1/2) without the cancellation of direct differencing:
/// an asymptotic series in 1/x for x >= 15, direct evaluation below.
double trigamma_half_step_difference(double x);

/// Regularized lower incomplete gamma P(s, x) = γ(s, x) / Γ(s).
/// Series for x < s + 1, Lentz continued fraction for the complement
/// otherwise. Result is clamped to [0, 1].
double lower_incomplete_gamma_regularized(double s, double x, const Accuracy& acc = {});

/// Q(s, x) = 1 - P(s, x), computed without cancellation where Q is small.
double upper_incomplete_gamma_regularized(double s, double x, const Accuracy& acc = {});

}  // namespace tjeffreys::specfun
