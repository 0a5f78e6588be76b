#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace epmd::rng {

// All randomness in the project goes through these helpers. The standard
// distributions are avoided on purpose: their output is implementation
// defined, and reports must be byte-identical across reruns.

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a path of indices,
// so that e.g. (task, size, repeat) cells do not depend on execution order.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(base);
    for (std::uint64_t p : path) s = splitmix64(s ^ (p + 0x632be59bd9b4e019ULL));
    return s;
}

// Uniform double in [0, 1) with 53 random bits.
inline double next_unit(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * next_unit(eng);
}

// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
inline std::uint64_t below(Engine& eng, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = eng();
    while (v >= limit) v = eng();
    return v % n;
}

// Box-Muller without the cached spare, so a call consumes a fixed
// amount of engine state.
inline double normal(Engine& eng, double mean = 0.0, double sd = 1.0) {
    double u1 = next_unit(eng);
    while (u1 <= 0.0) u1 = next_unit(eng);
    const double u2 = next_unit(eng);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    return mean + sd * z;
}

template <typename T>
void shuffle(std::vector<T>& v, Engine& eng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(below(eng, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace epmd::rng
