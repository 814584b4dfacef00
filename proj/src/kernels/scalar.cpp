#include <cstddef>

#include "tjeffreys/kernels.hpp"

namespace tjeffreys::kernels::scalar {

double sum(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double weighted_sum_squares(std::span<const double> w, std::span<const double> r) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += w[i] * r[i] * r[i];
    return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void gamma_rates(std::span<const double> r, double nu, double inv_sigma2, std::span<double> out) {
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = 0.5 * (nu + r[i] * r[i] * inv_sigma2);
}

}  // namespace tjeffreys::kernels::scalar
