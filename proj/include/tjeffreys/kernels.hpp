#pragma once

// Data-parallel inner loops over observations. Every kernel has a scalar
// reference in kernels::scalar and, on x86-64 builds, an AVX2/FMA variant in
// kernels::avx2. The unqualified entry points dispatch to the level chosen
// at first use: TJEFFREYS_SIMD=scalar|avx2 overrides CPU detection.

#include <span>
#include <string_view>

namespace tjeffreys::kernels {

enum class SimdLevel { Scalar, Avx2 };

bool is_supported(SimdLevel level);
SimdLevel active_level();
/// Throws DomainError if the level is not compiled in or not supported by the CPU.
void set_level(SimdLevel level);
std::string_view level_name(SimdLevel level);
SimdLevel parse_level(std::string_view name);

double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
/// Σ w_i r_i²
double weighted_sum_squares(std::span<const double> w, std::span<const double> r);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// out_i = (nu + r_i² * inv_sigma2) / 2, the rate of each latent precision's conditional.
void gamma_rates(std::span<const double> r, double nu, double inv_sigma2, std::span<double> out);

namespace scalar {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double weighted_sum_squares(std::span<const double> w, std::span<const double> r);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gamma_rates(std::span<const double> r, double nu, double inv_sigma2, std::span<double> out);
}  // namespace scalar

#if defined(TJEFFREYS_HAVE_AVX2)
namespace avx2 {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double weighted_sum_squares(std::span<const double> w, std::span<const double> r);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gamma_rates(std::span<const double> r, double nu, double inv_sigma2, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace tjeffreys::kernels
