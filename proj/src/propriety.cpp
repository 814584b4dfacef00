#include "tjeffreys/propriety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tjeffreys/error.hpp"
#include "tjeffreys/quadrature.hpp"
#include "tjeffreys/specfun.hpp"

namespace tjeffreys {

namespace {

constexpr double kSingularTol = 1e-10;
constexpr double kGrowthTol = 0.01;
constexpr double kStableTol = 1e-6;
constexpr double kSubsetGuard = 1e6;

void require_sample_sizes(int n, int p) {
    if (p < 1 || n <= p) {
        throw DomainError("need n > p >= 1, got n=" + std::to_string(n) + ", p=" + std::to_string(p));
    }
}

double raw_threshold(double a, int n, int p) { return (2.0 * a - 2.0) / (n - p); }

double binomial(int n, int k) {
    double result = 1.0;
    for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

// Analytic value of ∫_ε^T λ^{c-1} dλ.
double power_law(double c, double eps, double T) {
    const double log_ratio = std::log(T / eps);
    if (c == 0.0) return log_ratio;
    return std::pow(eps, c) * std::expm1(c * log_ratio) / c;
}

// |c| small enough that the power law stays within 1% of the log law over the ladder.
// log ∫_0^λ t^{v-1} e^{-rt} dt for r > 0, kept in log space so that neither
// Γ(v)/r^v nor a tiny P(v, rλ) over- or underflows.
double log_partial_gamma_integral(double v, double r, double lambda) {
    const double x = r * lambda;
    if (x < v + 1.0) {
        // λ^v e^{-x} Σ_k x^k / (v (v+1) ... (v+k))
        double term = 1.0 / v;
        double sum = term;
        for (int k = 1; k < 10000; ++k) {
            term *= x / (v + k);
            sum += term;
            if (term <= sum * std::numeric_limits<double>::epsilon()) break;
        }
        return v * std::log(lambda) - x + std::log(sum);
    }
    return specfun::log_gamma(v) - v * std::log(r) + std::log(specfun::lower_incomplete_gamma_regularized(v, x));
}

bool near_boundary(double c) { return std::abs(c) * std::log(1e12) <= 2.0 * kGrowthTol; }

bool verify_divergent(const std::vector<GrowthPoint>& growth, double c, double rate) {
    for (std::size_t k = 1; k < growth.size(); ++k) {
        if (!(growth[k].value > growth[k - 1].value)) return false;
    }
    const double T = 1.0;
    if (rate == 0.0) {
        for (const auto& g : growth) {
            if (std::abs(g.value / power_law(c, g.eps, T) - 1.0) > kGrowthTol) return false;
        }
        return true;
    }
    // With r > 0 the integrand approaches the pure power near 0, so the last
    // increment must follow the power law.
    const auto& last = growth[growth.size() - 1];
    const auto& prev = growth[growth.size() - 2];
    const double observed = last.value - prev.value;
    const double expected = power_law(c, last.eps, T) - power_law(c, prev.eps, T);
    return std::abs(observed / expected - 1.0) <= kGrowthTol;
}

bool verify_convergent(const std::vector<GrowthPoint>& growth) {
    const std::size_t m = growth.size();
    const double last = growth[m - 1].value;
    const double d_last = last - growth[m - 2].value;
    if (std::abs(d_last) <= kStableTol * std::abs(last)) return true;
    // Geometric tail extrapolation: the increments of a convergent power law
    // shrink by a constant factor per rung.
    const double d_prev = growth[m - 2].value - growth[m - 3].value;
    const double d_prev2 = growth[m - 3].value - growth[m - 4].value;
    if (!(d_prev > 0.0) || !(d_prev2 > 0.0)) return false;
    const double q = d_last / d_prev;
    const double q_prev = d_prev / d_prev2;
    if (!(q > 0.0 && q < 1.0) || !(q_prev > 0.0 && q_prev < 1.0)) return false;
    const double limit = last + d_last * q / (1.0 - q);
    const double limit_prev = growth[m - 2].value + d_prev * q_prev / (1.0 - q_prev);
    return std::abs(limit - limit_prev) <= kStableTol * std::abs(limit);
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Proper:
            return "Proper";
        case Verdict::Improper:
            return "Improper";
        case Verdict::Inconclusive:
            return "Inconclusive";
    }
    return "Inconclusive";
}

std::string_view to_string(Classification c) { return c == Classification::Divergent ? "Divergent" : "Convergent"; }

Verdict parse_verdict(std::string_view s) {
    if (s == "Proper") return Verdict::Proper;
    if (s == "Improper") return Verdict::Improper;
    if (s == "Inconclusive") return Verdict::Inconclusive;
    throw ValidationError("unknown verdict '" + std::string(s) + "'");
}

Classification parse_classification(std::string_view s) {
    if (s == "Divergent") return Classification::Divergent;
    if (s == "Convergent") return Classification::Convergent;
    throw ValidationError("unknown classification '" + std::string(s) + "'");
}

double critical_nu(double a, int n, int p) {
    require_sample_sizes(n, p);
    return std::max(0.0, raw_threshold(a, n, p));
}

double c_exponent(double nu, int n, int p, double a) {
    require_sample_sizes(n, p);
    return 0.5 * (n - p) * (nu - raw_threshold(a, n, p));
}

bool sigma_integrability_check(int n, int p, double a) { return n + 2.0 * a - p - 2.0 > 0.0; }

SandwichBounds sandwich_bounds(double v, double r, double lambda_next) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("sandwich_bounds: the integral is not finite for v <= 0");
    }
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("sandwich_bounds: r must be >= 0");
    if (!(lambda_next > 0.0) || !std::isfinite(lambda_next)) {
        throw DomainError("sandwich_bounds: lambda_next must be > 0");
    }
    SandwichBounds out;
    out.upper = std::pow(lambda_next, v) / v;
    out.lower = out.upper * std::exp(-r * lambda_next);
    if (r == 0.0) {
        out.exact = out.upper;
    } else {
        out.exact = std::clamp(std::exp(log_partial_gamma_integral(v, r, lambda_next)), out.lower, out.upper);
    }
    return out;
}

SubsetSelection max_nonsingular_subset_product(const MixingVector& lambda, const Dataset& data, int size) {
    const int n = data.n();
    const int p = data.p();
    if (lambda.size() != n) throw DomainError("mixing vector length does not match the dataset");
    if (size != p && size != p + 1) throw DomainError("subset size must be p or p+1");
    if (size > n) throw InfeasibleError("subset size exceeds n");
    if (binomial(n, size) > kSubsetGuard) {
        throw DomainError("exhaustive subset search too large: C(n, size) exceeds 1e6");
    }

    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;

    SubsetSelection best;
    double best_log = -std::numeric_limits<double>::infinity();
    Eigen::MatrixXd M(size, size);

    while (true) {
        double log_product = 0.0;
        for (int i : idx) log_product += std::log(lambda[i]);
        if (log_product > best_log) {
            double column_norms = 1.0;
            for (int j = 0; j < size; ++j) {
                const int row = idx[j];
                M.col(j).head(p) = data.X().row(row).transpose();
                if (size == p + 1) M(p, j) = data.y()[row];
                column_norms *= M.col(j).norm();
            }
            const double det = M.partialPivLu().determinant();
            if (std::abs(det) > kSingularTol * column_norms) {
                best_log = log_product;
                best.indices = idx;
            }
        }
        // Next combination in lexicographic order.
        int k = size - 1;
        while (k >= 0 && idx[k] == n - size + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (int j = k + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }

    if (best.indices.empty()) throw InfeasibleError("no index subset gives a nonsingular matrix");
    best.product = 1.0;
    for (int i : best.indices) best.product *= lambda[i];
    return best;
}

double truncated_kernel_integral_quadrature(double c, double r, double eps, double T) {
    if (!(eps > 0.0) || !(T > eps)) throw DomainError("truncated kernel: need 0 < eps < T");
    if (!(r >= 0.0)) throw DomainError("truncated kernel: r must be >= 0");
    quadrature::Options opts;
    opts.rel_tol = 1e-13;
    opts.abs_tol = 1e-300;
    const auto f = [c, r](double t) { return std::exp(c * t - r * std::exp(t)); };
    const auto result = quadrature::integrate_adaptive(f, std::log(eps), std::log(T), opts);
    return result.value;
}

double truncated_kernel_integral(double c, double r, double eps, double T) {
    if (!(eps > 0.0) || !(T > eps)) throw DomainError("truncated kernel: need 0 < eps < T");
    if (!(r >= 0.0)) throw DomainError("truncated kernel: r must be >= 0");
    if (r == 0.0) return power_law(c, eps, T);
    if (c > 0.0) {
        const double scale = std::exp(specfun::log_gamma(c) - c * std::log(r));
        const double lo = r * eps;
        const double hi = r * T;
        if (lo > c + 1.0) {
            return scale * (specfun::upper_incomplete_gamma_regularized(c, lo) -
                            specfun::upper_incomplete_gamma_regularized(c, hi));
        }
        return scale * (specfun::lower_incomplete_gamma_regularized(c, hi) -
                        specfun::lower_incomplete_gamma_regularized(c, lo));
    }
    return truncated_kernel_integral_quadrature(c, r, eps, T);
}

std::vector<double> epsilon_ladder() {
    std::vector<double> ladder;
    for (int k = 2; k <= 12; ++k) ladder.push_back(std::pow(10.0, -k));
    return ladder;
}

std::vector<Evidence> divergence_diagnostic(std::span<const double> nu_grid, int n, int p, double a,
                                            std::optional<double> rate) {
    require_sample_sizes(n, p);
    if (rate && !(*rate >= 0.0)) throw DomainError("divergence_diagnostic: rate must be >= 0");
    const std::vector<double> ladder = epsilon_ladder();
    std::vector<Evidence> table;
    table.reserve(nu_grid.size());
    for (double nu : nu_grid) {
        if (!(nu > 0.0)) throw DomainError("divergence_diagnostic: nu must be positive");
        Evidence e;
        e.nu = nu;
        e.c = c_exponent(nu, n, p, a);
        e.rate = rate ? *rate : 0.5 * (n - p) * nu;
        e.classification = e.c <= 0.0 ? Classification::Divergent : Classification::Convergent;
        for (double eps : ladder) {
            e.growth.push_back({eps, truncated_kernel_integral_quadrature(e.c, e.rate, eps, 1.0)});
        }
        if (e.classification == Classification::Divergent) {
            e.verified = verify_divergent(e.growth, e.c, e.rate);
            e.regime = near_boundary(e.c) ? "c=0 (log divergence)" : "power-law divergence";
        } else {
            e.verified = verify_convergent(e.growth);
            e.regime = near_boundary(e.c) ? "c>0 near threshold (indistinguishable from log divergence)"
                                          : "convergent";
        }
        table.push_back(std::move(e));
    }
    return table;
}

std::vector<double> default_probe_grid(double critical) {
    if (critical > 0.0) {
        return {0.25 * critical, 0.5 * critical, critical, 2.0 * critical, 4.0 * critical};
    }
    return {0.01, 0.1, 1.0, 10.0};
}

AuditReport audit(int n, int p, const PriorSpec& spec, std::span<const double> nu_probe_grid) {
    require_sample_sizes(n, p);
    if (spec.p() != p) {
        throw ValidationError("prior was built for p=" + std::to_string(spec.p()) + " but the data have p=" +
                              std::to_string(p));
    }
    AuditReport report;
    report.n = n;
    report.p = p;
    report.a = spec.a();
    report.prior = spec.label();
    report.critical_nu = critical_nu(spec.a(), n, p);

    const std::vector<double> grid = nu_probe_grid.empty()
                                         ? default_probe_grid(report.critical_nu)
                                         : std::vector<double>(nu_probe_grid.begin(), nu_probe_grid.end());
    report.evidence = divergence_diagnostic(grid, n, p, spec.a(), std::nullopt);

    // Does π(ν) put positive density anywhere on (0, critical]?
    bool mass_below = false;
    double witness = 0.0;
    if (report.critical_nu > 0.0) {
        constexpr int kProbes = 200;
        const double lo = std::log(report.critical_nu * 1e-8);
        const double hi = std::log(report.critical_nu);
        for (int k = 0; k <= kProbes && !mass_below; ++k) {
            const double nu = std::exp(lo + (hi - lo) * k / kProbes);
            if (std::isfinite(nu_prior_log_unnormalized(nu, spec))) {
                mass_below = true;
                witness = nu;
            }
        }
    }

    std::ostringstream note;
    if (!sigma_integrability_check(n, p, spec.a())) {
        report.verdict = Verdict::Improper;
        note << "n + 2a - p - 2 <= 0: the integral over sigma^2 diverges.";
    } else if (spec.a() > 1.0 && mass_below) {
        report.verdict = Verdict::Improper;
        note << "a > 1 and pi(nu) > 0 at nu=" << witness << " inside (0, " << report.critical_nu
             << "]; propriety requires pi(nu) = 0 on that interval, so the posterior is improper.";
    } else if (spec.kind() == PriorKind::IndependenceJeffreys) {
        report.verdict = Verdict::Proper;
        note << "a = 1 with a proper pi(nu) and n > p: the posterior is proper.";
    } else {
        report.verdict = Verdict::Inconclusive;
        note << "The necessary condition holds (pi(nu) = 0 on (0, " << report.critical_nu
             << "]), but it is not sufficient; propriety is not established.";
    }
    report.note = note.str();
    return report;
}

AuditReport audit(const Dataset& data, const PriorSpec& spec, std::span<const double> nu_probe_grid) {
    return audit(data.n(), data.p(), spec, nu_probe_grid);
}

}  // namespace tjeffreys
