#include <atomic>
#include <cstdlib>
#include <string>

#include "tjeffreys/error.hpp"
#include "tjeffreys/kernels.hpp"

namespace tjeffreys::kernels {

namespace {

struct KernelTable {
    SimdLevel level;
    double (*sum)(std::span<const double>);
    double (*dot)(std::span<const double>, std::span<const double>);
    double (*weighted_sum_squares)(std::span<const double>, std::span<const double>);
    void (*axpy)(double, std::span<const double>, std::span<double>);
    void (*gamma_rates)(std::span<const double>, double, double, std::span<double>);
};

constexpr KernelTable kScalarTable{SimdLevel::Scalar, scalar::sum, scalar::dot, scalar::weighted_sum_squares,
                                   scalar::axpy, scalar::gamma_rates};
#if defined(TJEFFREYS_HAVE_AVX2)
constexpr KernelTable kAvx2Table{SimdLevel::Avx2, avx2::sum, avx2::dot, avx2::weighted_sum_squares,
                                 avx2::axpy, avx2::gamma_rates};
#endif

const KernelTable* table_for(SimdLevel level) {
#if defined(TJEFFREYS_HAVE_AVX2)
    if (level == SimdLevel::Avx2) return &kAvx2Table;
#endif
    (void)level;
    return &kScalarTable;
}

SimdLevel detect_level() {
    if (const char* env = std::getenv("TJEFFREYS_SIMD")) {
        const SimdLevel requested = parse_level(env);
        if (is_supported(requested)) return requested;
    }
    return is_supported(SimdLevel::Avx2) ? SimdLevel::Avx2 : SimdLevel::Scalar;
}

std::atomic<const KernelTable*>& active_table() {
    static std::atomic<const KernelTable*> table{table_for(detect_level())};
    return table;
}

const KernelTable& table() { return *active_table().load(std::memory_order_acquire); }

}  // namespace

bool is_supported(SimdLevel level) {
    switch (level) {
        case SimdLevel::Scalar:
            return true;
        case SimdLevel::Avx2:
#if defined(TJEFFREYS_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

SimdLevel active_level() { return table().level; }

void set_level(SimdLevel level) {
    if (!is_supported(level)) {
        throw DomainError("SIMD level " + std::string(level_name(level)) + " is not available");
    }
    active_table().store(table_for(level), std::memory_order_release);
}

std::string_view level_name(SimdLevel level) { return level == SimdLevel::Avx2 ? "avx2" : "scalar"; }

SimdLevel parse_level(std::string_view name) {
    if (name == "avx2") return SimdLevel::Avx2;
    if (name == "scalar") return SimdLevel::Scalar;
    throw DomainError("unknown SIMD level '" + std::string(name) + "'");
}

double sum(std::span<const double> x) { return table().sum(x); }
double dot(std::span<const double> x, std::span<const double> y) { return table().dot(x, y); }
double weighted_sum_squares(std::span<const double> w, std::span<const double> r) {
    return table().weighted_sum_squares(w, r);
}
void axpy(double alpha, std::span<const double> x, std::span<double> y) { table().axpy(alpha, x, y); }
void gamma_rates(std::span<const double> r, double nu, double inv_sigma2, std::span<double> out) {
    table().gamma_rates(r, nu, inv_sigma2, out);
}

}  // namespace tjeffreys::kernels
