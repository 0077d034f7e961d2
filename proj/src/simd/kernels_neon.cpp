// NEON kernel variants for aarch64 builds. Same contracts as the scalar
// reference; 2-lane f64 accumulation with a scalar tail.

#include "rapport/simd.hpp"

#if defined(__ARM_NEON) && defined(__aarch64__)

#include <arm_neon.h>

namespace rapport::simd {
namespace {

double sum_neon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) total += x[i];
    return total;
}

double dot_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) total += x[i] * y[i];
    return total;
}

double sumsq_neon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(x + i);
        acc = vfmaq_f64(acc, v, v);
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) total += x[i] * x[i];
    return total;
}

double squared_distance_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        total += d * d;
    }
    return total;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

double sumsq_f32_neon(const float* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t v = vld1q_f32(x + i);
        const float64x2_t lo = vcvt_f64_f32(vget_low_f32(v));
        const float64x2_t hi = vcvt_high_f64_f32(v);
        acc = vfmaq_f64(acc, lo, lo);
        acc = vfmaq_f64(acc, hi, hi);
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double v = static_cast<double>(x[i]);
        total += v * v;
    }
    return total;
}

}  // namespace

const Kernels& neon_kernels() {
    static const Kernels k = {sum_neon,  dot_neon,  sumsq_neon,
                              squared_distance_neon, axpy_neon, sumsq_f32_neon};
    return k;
}

}  // namespace rapport::simd

#endif  // __ARM_NEON && __aarch64__
