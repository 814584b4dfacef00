// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cstddef>

#include "tjeffreys/kernels.hpp"

namespace tjeffreys::kernels::avx2 {

namespace {

inline double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

double sum(std::span<const double> x) {
    const std::size_t n = x.size();
    const double* p = x.data();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(p + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
    double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += p[i];
    return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    const double* px = x.data();
    const double* py = y.data();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i + 4), _mm256_loadu_pd(py + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
    }
    double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += px[i] * py[i];
    return s;
}

double weighted_sum_squares(std::span<const double> w, std::span<const double> r) {
    const std::size_t n = r.size();
    const double* pw = w.data();
    const double* pr = r.data();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d r0 = _mm256_loadu_pd(pr + i);
        const __m256d r1 = _mm256_loadu_pd(pr + i + 4);
        acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(pw + i), r0), r0, acc0);
        acc1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(pw + i + 4), r1), r1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d r0 = _mm256_loadu_pd(pr + i);
        acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(pw + i), r0), r0, acc0);
    }
    double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += pw[i] * pr[i] * pr[i];
    return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    const double* px = x.data();
    double* py = y.data();
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(py + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i)));
    }
    for (; i < n; ++i) py[i] += alpha * px[i];
}

void gamma_rates(std::span<const double> r, double nu, double inv_sigma2, std::span<double> out) {
    const std::size_t n = r.size();
    const double* pr = r.data();
    double* po = out.data();
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d vnu = _mm256_set1_pd(nu);
    const __m256d scale = _mm256_set1_pd(inv_sigma2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d rv = _mm256_loadu_pd(pr + i);
        const __m256d sq = _mm256_mul_pd(_mm256_mul_pd(rv, rv), scale);
        _mm256_storeu_pd(po + i, _mm256_mul_pd(half, _mm256_add_pd(vnu, sq)));
    }
    for (; i < n; ++i) po[i] = 0.5 * (nu + pr[i] * pr[i] * inv_sigma2);
}

}  // namespace tjeffreys::kernels::avx2
