#pragma once

// Numerical mechanics of the necessary condition for posterior propriety
// under π(β, σ², ν) ∝ (σ²)^(-a) π(ν): the posterior can only be proper if
// π(ν) vanishes on (0, (2a-2)/(n-p)].

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tjeffreys/priors.hpp"
#include "tjeffreys/regression.hpp"

namespace tjeffreys {

enum class Verdict { Proper, Improper, Inconclusive };
enum class Classification { Divergent, Convergent };

std::string_view to_string(Verdict v);
std::string_view to_string(Classification c);
Verdict parse_verdict(std::string_view s);
Classification parse_classification(std::string_view s);

struct GrowthPoint {
    double eps = 0.0;
    double value = 0.0;
    bool operator==(const GrowthPoint&) const = default;
};

struct Evidence {
    double nu = 0.0;
    double c = 0.0;
    double rate = 0.0;
    Classification classification = Classification::Convergent;
    /// Whether the growth table behaves as the sign of c predicts.
    bool verified = false;
    std::string regime;
    std::vector<GrowthPoint> growth;
    bool operator==(const Evidence&) const = default;
};

struct AuditReport {
    Verdict verdict = Verdict::Inconclusive;
    double critical_nu = 0.0;
    double a = 0.0;
    int n = 0;
    int p = 0;
    std::string prior;
    std::string note;
    std::vector<Evidence> evidence;
    bool operator==(const AuditReport&) const = default;
};

struct SubsetSelection {
    std::vector<int> indices;  // zero-based, ascending
    double product = 0.0;
};

struct SandwichBounds {
    double lower = 0.0;
    double exact = 0.0;
    double upper = 0.0;
};

/// (2a-2)/(n-p), floored at 0. Throws DomainError if n <= p.
double critical_nu(double a, int n, int p);

/// (ν(n-p) + 2 - 2a)/2, evaluated as (n-p)/2 · (ν - (2a-2)/(n-p)) so that its
/// sign is exactly the sign of ν minus the threshold.
double c_exponent(double nu, int n, int p, double a);

/// n + 2a - p - 2 > 0, the condition for the σ² integral to be finite.
bool sigma_integrability_check(int n, int p, double a);

/// Bounds (λ^v/v)e^{-rλ} <= ∫_0^λ t^{v-1}e^{-rt}dt <= λ^v/v. Throws for v <= 0.
SandwichBounds sandwich_bounds(double v, double r, double lambda_next);

/// Exhaustive maximum of Π λ_i over index subsets of the given size (p or p+1)
/// whose columns x_l (size p) or (x_l; y_l) (size p+1) form a nonsingular
/// matrix: |det| > 1e-10 · Π column norms. Guarded to C(n, size) <= 10^6.
SubsetSelection max_nonsingular_subset_product(const MixingVector& lambda, const Dataset& data, int size);

/// ∫_ε^T λ^{c-1} e^{-rλ} dλ: closed form for r = 0, incomplete-gamma
/// differences for r > 0 and c > 0, quadrature in log λ otherwise.
double truncated_kernel_integral(double c, double r, double eps, double T);

/// The same integral always by adaptive quadrature in t = log λ.
double truncated_kernel_integral_quadrature(double c, double r, double eps, double T);

/// ε = 10^-2 ... 10^-12.
std::vector<double> epsilon_ladder();

/// For each ν: c, sign classification, and a growth table of the reduced
/// kernel integral over [ε, 1] along the ε ladder, computed by quadrature and
/// checked against the analytic power/log law. `rate` = nullopt uses the
/// kernel rate (n-p)ν/2.
std::vector<Evidence> divergence_diagnostic(std::span<const double> nu_grid, int n, int p, double a,
                                            std::optional<double> rate = std::nullopt);

/// Probe grid around the threshold used when none is supplied.
std::vector<double> default_probe_grid(double critical);

AuditReport audit(int n, int p, const PriorSpec& spec, std::span<const double> nu_probe_grid = {});
AuditReport audit(const Dataset& data, const PriorSpec& spec, std::span<const double> nu_probe_grid = {});

}  // namespace tjeffreys
