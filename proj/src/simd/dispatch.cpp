// Runtime kernel selection. The best available variant is chosen once at
// first use; tests can pin a specific variant via force_level().

#include "rapport/simd.hpp"

#include <atomic>

#include "rapport/error.hpp"

namespace rapport::simd {

#ifdef RAPPORT_HAVE_AVX2_TU
const Kernels& avx2_kernels();
#endif
#ifdef RAPPORT_HAVE_NEON_TU
const Kernels& neon_kernels();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(RAPPORT_HAVE_AVX2_TU) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool cpu_has_neon() {
#ifdef RAPPORT_HAVE_NEON_TU
    return true;  // NEON is baseline on aarch64
#else
    return false;
#endif
}

Level best_level() {
    if (cpu_has_avx2()) return Level::avx2;
    if (cpu_has_neon()) return Level::neon;
    return Level::scalar;
}

const Kernels& kernels_for(Level level) {
    switch (level) {
#ifdef RAPPORT_HAVE_AVX2_TU
        case Level::avx2: return avx2_kernels();
#endif
#ifdef RAPPORT_HAVE_NEON_TU
        case Level::neon: return neon_kernels();
#endif
        default: return scalar_kernels();
    }
}

std::atomic<const Kernels*> g_active{nullptr};
std::atomic<Level> g_level{Level::scalar};

const Kernels& active() {
    const Kernels* k = g_active.load(std::memory_order_acquire);
    if (!k) {
        const Level level = best_level();
        g_level.store(level, std::memory_order_relaxed);
        k = &kernels_for(level);
        g_active.store(k, std::memory_order_release);
    }
    return *k;
}

}  // namespace

bool level_available(Level level) {
    switch (level) {
        case Level::scalar: return true;
        case Level::avx2: return cpu_has_avx2();
        case Level::neon: return cpu_has_neon();
    }
    return false;
}

Level active_level() {
    active();
    return g_level.load(std::memory_order_relaxed);
}

void force_level(Level level) {
    if (!level_available(level)) throw InputError("simd: requested kernel variant not available on this CPU");
    g_level.store(level, std::memory_order_relaxed);
    g_active.store(&kernels_for(level), std::memory_order_release);
}

void reset_level() {
    const Level level = best_level();
    g_level.store(level, std::memory_order_relaxed);
    g_active.store(&kernels_for(level), std::memory_order_release);
}

double sum(const double* x, std::size_t n) { return active().sum(x, n); }
double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
double sumsq(const double* x, std::size_t n) { return active().sumsq(x, n); }
double squared_distance(const double* x, const double* y, std::size_t n) {
    return active().squared_distance(x, y, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
double sumsq_f32(const float* x, std::size_t n) { return active().sumsq_f32(x, n); }

}  // namespace rapport::simd
