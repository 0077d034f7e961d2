// AVX2 + FMA kernel variants. This translation unit is the only one compiled
// with -mavx2; dispatch.cpp checks CPU support before routing here.

#include "rapport/simd.hpp"

#ifdef __AVX2__

#include <immintrin.h>

namespace rapport::simd {
namespace {

double hsum4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double total = hsum4(acc);
    for (; i < n; ++i) total += x[i];
    return total;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double total = hsum4(acc);
    for (; i < n; ++i) total += x[i] * y[i];
    return total;
}

double sumsq_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum4(acc);
    for (; i < n; ++i) total += x[i] * x[i];
    return total;
}

double squared_distance_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double total = hsum4(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        total += d * d;
    }
    return total;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double sumsq_f32_avx2(const float* x, std::size_t n) {
    // Accumulate in double: convert each 4-float half of an 8-float load.
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 v = _mm256_loadu_ps(x + i);
        const __m256d lo = _mm256_cvtps_pd(_mm256_castps256_ps128(v));
        const __m256d hi = _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1));
        acc = _mm256_fmadd_pd(lo, lo, acc);
        acc = _mm256_fmadd_pd(hi, hi, acc);
    }
    double total = hsum4(acc);
    for (; i < n; ++i) {
        const double v = static_cast<double>(x[i]);
        total += v * v;
    }
    return total;
}

}  // namespace

const Kernels& avx2_kernels() {
    static const Kernels k = {sum_avx2,  dot_avx2,  sumsq_avx2,
                              squared_distance_avx2, axpy_avx2, sumsq_f32_avx2};
    return k;
}

}  // namespace rapport::simd

#endif  // __AVX2__
