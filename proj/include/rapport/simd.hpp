#pragma once

// Arithmetic kernels behind the hot loops (windowed RMS, RBF distances, ridge
// solves). Scalar reference implementations always exist; AVX2/NEON variants
// are selected at runtime when the CPU supports them. All variants are
// equivalence-tested against the scalar reference.

#include <cstddef>

namespace rapport::simd {

enum class Level { scalar = 0, avx2 = 1, neon = 2 };

struct Kernels {
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*sumsq)(const double*, std::size_t);
    double (*squared_distance)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*sumsq_f32)(const float*, std::size_t);
};

const Kernels& scalar_kernels();
bool level_available(Level level);
Level active_level();

// Test hook: pin the dispatch to a specific variant. Throws InputError if the
// requested variant is not available on this machine.
void force_level(Level level);
void reset_level();  // back to best available

// Dispatched entry points.
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double sumsq(const double* x, std::size_t n);
double squared_distance(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double sumsq_f32(const float* x, std::size_t n);

}  // namespace rapport::simd
