// Scalar reference kernels. These define the semantics; vector variants must
// agree with them (exactly for exactly-representable sums, within rounding
// tolerance otherwise).

#include "rapport/simd.hpp"

namespace rapport::simd {
namespace {

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sumsq_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double squared_distance_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double sumsq_f32_scalar(const float* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = static_cast<double>(x[i]);
        acc += v * v;
    }
    return acc;
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k = {sum_scalar,  dot_scalar,  sumsq_scalar,
                              squared_distance_scalar, axpy_scalar, sumsq_f32_scalar};
    return k;
}

}  // namespace rapport::simd
