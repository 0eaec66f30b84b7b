#pragma once

#include <cstdint>

namespace entropywalk {

/// Stateless 64-bit finalizer (splitmix64 style). Good avalanche, cheap.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Small counter-based PRNG (splitmix64). One per walk stream: 8 bytes of
/// state, so deriving millions of independent streams is free.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n). Lemire's multiply-reject method, no modulo bias.
    uint64_t bounded(uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto low = static_cast<uint64_t>(m);
        if (low < n) {
            uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * n;
                low = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

/// Independent stream for one tour, derived from (master_seed, tour_index).
/// Counter-based derivation keeps runs reproducible no matter how tours are
/// scheduled across workers.
inline SplitMix64 tour_stream(uint64_t master_seed, uint64_t tour_index) {
    return SplitMix64(mix64(master_seed ^ mix64(tour_index + 0x632be59bd9b4e019ULL)));
}

} // namespace entropywalk
