#ifndef HOMOGLAB_RNG_HPP
#define HOMOGLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <span>

// Counter-based pseudo-random derivation. Every random quantity in the
// library is a pure function of (seed, integer key), so realizations exist
// conceptually on the whole lattice without storage and evaluation order
// never matters.

namespace homoglab::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer (Steele/Lea/Flood, via Vigna's fixed-increment form).
inline std::uint64_t mix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ v);
}

/// Stream tags keep distinct uses of the same (seed, cell) uncorrelated.
enum : std::uint64_t {
    kStreamStripe = 0x53545249ULL,
    kStreamChecker = 0x43484543ULL,
    kStreamPoisson = 0x504f4953ULL,
    kStreamReplicate = 0x5245504cULL,
};

/// Hash of a seed, a stream tag and up to three signed lattice coordinates.
inline std::uint64_t hash_cell(std::uint64_t seed, std::uint64_t stream,
                               std::span<const std::int64_t> z) {
    std::uint64_t h = combine(seed, stream);
    for (std::int64_t c : z) h = combine(h, static_cast<std::uint64_t>(c));
    return h;
}

inline std::uint64_t hash_cell1(std::uint64_t seed, std::uint64_t stream, std::int64_t a) {
    const std::int64_t z[1] = {a};
    return hash_cell(seed, stream, z);
}

/// Uniform double in [0,1) from the top 53 bits.
inline double u01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// A keyed counter stream: next() is a pure function of (key, counter).
struct Sequence {
    std::uint64_t key = 0;
    std::uint64_t counter = 0;

    std::uint64_t next() { return mix64(key + (++counter) * kGolden); }
    double next_u01() { return u01(next()); }
};

/// Knuth's product method; adequate for the small intensities used here.
inline int poisson(Sequence& seq, double lambda) {
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= seq.next_u01();
    } while (p > limit);
    return k - 1;
}

/// Standard normal via Box-Muller, used by test fixtures.
inline double normal(Sequence& seq) {
    double u1 = seq.next_u01();
    double u2 = seq.next_u01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace homoglab::rng

#endif
