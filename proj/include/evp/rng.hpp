#pragma once

#include <cstdint>

namespace evp {

// SplitMix64 (Steele/Lea/Flood; Vigna's fixed-increment variant). 64 bits of
// state, passes BigCrush, and trivially splittable: a stream is fully
// determined by its seed, so derived streams never share state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0,1): 53-bit grid offset by half a step,
    // so neither 0 nor 1 is ever returned.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// The (key+1)-th raw output of a SplitMix64 seeded with `base`, used as a
// pure hash for deriving child stream seeds.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (key + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stream layout shared by every sampler in the project:
//
//   group_key = n   row draws of size n (n >= 1)
//   group_key = 0   draws of the truncated limiting point process
//
// Replicate r of a group sees the same stream no matter which experiment
// requests it, so different functionals of the same realization (e.g. the
// maximum and the ladder at t=0) can be compared sample-by-sample.
inline SplitMix64 replicate_stream(std::uint64_t base_seed,
                                   std::uint64_t group_key,
                                   std::uint64_t replicate) {
    return SplitMix64(derive_seed(derive_seed(base_seed, group_key), replicate));
}

} // namespace evp
