#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pufkit {

// splitmix64 step; used both as a generator and as a seed mixer.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive an independent stream seed from (base, id). Chained for more ids.
inline uint64_t derive_seed(uint64_t base, uint64_t id) {
    uint64_t s = base ^ (0x6a09e667f3bcc909ULL + id * 0x9e3779b97f4a7c15ULL);
    splitmix64(s);
    return splitmix64(s);
}

// Stable 64-bit FNV-1a for strings (std::hash is not portable across builds).
inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) { h ^= c; h *= 0x100000001b3ULL; }
    return h;
}

double normal_cdf(double z);   // Phi(z), via erfc
double normal_ppf(double p);   // inverse Phi, Wichura's PPND16 rational fits

// Deterministic stream: mt19937_64 is fully specified by the standard, and the
// uniform/gauss ladders below avoid the implementation-defined std
// distributions, so identical seeds give identical bits on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // [0, 1), 53-bit mantissa
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

    // (0, 1) exclusive, for inverse-transform sampling
    double uniform_open() { return (double(eng_() >> 11) + 0.5) * 0x1.0p-53; }

    double gauss() { return normal_ppf(uniform_open()); }

private:
    std::mt19937_64 eng_;
};

}  // namespace pufkit
