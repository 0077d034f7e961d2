#pragma once

// Deterministic random numbers. The standard library's engines are portable but
// its distributions are not (implementations may differ), so every draw that can
// influence a persisted result goes through this header.

#include <cmath>
#include <cstdint>
#include <vector>

namespace rapport {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Mixes a base seed with stream tags so that (seed, repetition, split, ...)
// yields independent, order-insensitive substreams.
inline std::uint64_t derive_seed(std::uint64_t seed) { return seed; }

template <typename... Tags>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, Tags... rest) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + tag);
    std::uint64_t mixed = splitmix64(s) ^ tag;
    return derive_seed(mixed, rest...);
}

// xoshiro256++ (Blackman & Vigna), seeded via splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    int uniform_int(int lo, int hi) {  // inclusive range
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Box-Muller with a cached spare; deterministic across platforms.
    double normal(double mean = 0.0, double sd = 1.0) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sd * spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform01(); } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(theta);
        have_spare_ = true;
        return mean + sd * radius * std::cos(theta);
    }

    // Knuth's product method; fine for the modest lambdas used here.
    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        if (lambda > 64.0) {  // normal approximation for large rates
            const int k = static_cast<int>(std::lround(normal(lambda, std::sqrt(lambda))));
            return k < 0 ? 0 : k;
        }
        const double limit = std::exp(-lambda);
        int k = 0;
        double prod = 1.0;
        do {
            ++k;
            prod *= uniform01();
        } while (prod > limit);
        return k - 1;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace rapport
