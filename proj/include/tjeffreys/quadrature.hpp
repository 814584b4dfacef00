#pragma once

#include <functional>

namespace tjeffreys::quadrature {

using Integrand = std::function<double(double)>;

struct Options {
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    /// Interval budget for the adaptive rule; level budget for tanh-sinh.
    int max_subdivisions = 4000;
    int max_levels = 12;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Globally adaptive 15-point Gauss–Kronrod on [a, b]. Never evaluates
/// the endpoints, so integrable endpoint singularities are tolerated.
Result integrate_adaptive(const Integrand& f, double a, double b, const Options& opts = {});

/// ∫_a^∞ f by mapping x = a + t/(1-t) onto [0, 1) and integrating adaptively.
Result integrate_semi_infinite(const Integrand& f, double a, const Options& opts = {});

/// Double-exponential (tanh-sinh) rule on [a, b] with step halving until
/// successive levels agree. Shares no code with the Gauss–Kronrod path.
Result integrate_tanh_sinh(const Integrand& f, double a, double b, const Options& opts = {});

}  // namespace tjeffreys::quadrature
