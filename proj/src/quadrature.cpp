#include "tjeffreys/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "tjeffreys/error.hpp"

namespace tjeffreys::quadrature {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod_15(const Integrand& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * pair;
        }
    }
    kronrod *= half;
    gauss *= half;
    double err = std::abs(kronrod - gauss);
    if (!std::isfinite(kronrod)) {
        err = std::numeric_limits<double>::infinity();
    }
    return {a, b, kronrod, err};
}

bool within_tolerance(double err, double value, const Options& opts) {
    return err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
}

}  // namespace

Result integrate_adaptive(const Integrand& f, double a, double b, const Options& opts) {
    if (!(opts.abs_tol >= 0.0) || !(opts.rel_tol >= 0.0) || (opts.abs_tol == 0.0 && opts.rel_tol == 0.0)) {
        throw DomainError("quadrature: tolerances must be nonnegative and not both zero");
    }
    if (a == b) return {0.0, 0.0, 0, true};
    if (b < a) {
        Result r = integrate_adaptive(f, b, a, opts);
        r.value = -r.value;
        return r;
    }

    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod_15(f, a, b);
    heap.push(first);
    double total = first.value;
    double total_err = first.error;
    int evaluations = 15;

    while (!within_tolerance(total_err, total, opts) && static_cast<int>(heap.size()) < opts.max_subdivisions) {
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            break;  // interval no longer resolvable in double precision
        }
        heap.pop();
        Segment left = gauss_kronrod_15(f, worst.a, mid);
        Segment right = gauss_kronrod_15(f, mid, worst.b);
        evaluations += 30;
        heap.push(left);
        heap.push(right);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
    }

    // Final exact re-summation of the partition.
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }

    Result result{total, total_err, evaluations, within_tolerance(total_err, total, opts)};
    if (!std::isfinite(total)) result.converged = false;
    return result;
}

Result integrate_semi_infinite(const Integrand& f, double a, const Options& opts) {
    auto mapped = [&f, a](double t) {
        const double s = 1.0 - t;
        return f(a + t / s) / (s * s);
    };
    return integrate_adaptive(mapped, 0.0, 1.0, opts);
}

Result integrate_tanh_sinh(const Integrand& f, double a, double b, const Options& opts) {
    if (a == b) return {0.0, 0.0, 0, true};
    if (b < a) {
        Result r = integrate_tanh_sinh(f, b, a, opts);
        r.value = -r.value;
        return r;
    }
    constexpr double half_pi = std::numbers::pi / 2.0;
    constexpr double t_max = 4.0;
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    int evaluations = 0;

    // Contribution of the symmetric node pair at parameter t > 0.
    auto pair_sum = [&](double t) {
        const double u = half_pi * std::sinh(t);
        const double cu = std::cosh(u);
        const double offset = half * std::exp(-u) / cu;  // half * (1 - tanh u)
        const double w = half_pi * std::cosh(t) / (cu * cu);
        double s = 0.0;
        const double lo = a + offset;
        const double hi = b - offset;
        if (offset > 0.0 && lo > a && lo < b) {
            s += w * f(lo);
            ++evaluations;
        }
        if (offset > 0.0 && hi > a && hi < b) {
            s += w * f(hi);
            ++evaluations;
        }
        return s;
    };

    double h = 1.0;
    double sum = half_pi * f(centre);
    ++evaluations;
    for (double t = h; t <= t_max; t += h) sum += pair_sum(t);
    double estimate = half * h * sum;
    double previous = estimate;
    double err = std::numeric_limits<double>::infinity();

    for (int level = 1; level <= opts.max_levels; ++level) {
        h *= 0.5;
        for (double t = h; t <= t_max; t += 2.0 * h) sum += pair_sum(t);
        estimate = half * h * sum;
        err = std::abs(estimate - previous);
        previous = estimate;
        if (level >= 3 && within_tolerance(err, estimate, opts)) {
            return {estimate, err, evaluations, std::isfinite(estimate)};
        }
    }
    return {estimate, err, evaluations, false};
}

}  // namespace tjeffreys::quadrature
