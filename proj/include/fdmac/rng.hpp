#ifndef FDMAC_RNG_HPP_
#define FDMAC_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace fdmac {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Deterministic random stream. mt19937_64 is fully specified by the
// standard, so sequences are identical across platforms; the derived
// draws below avoid std::*_distribution, whose mappings are not.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // Uniform integer in [0, bound] via 128-bit multiply-shift.
    uint32_t uniform_int(uint32_t bound_inclusive) {
        unsigned __int128 prod =
            static_cast<unsigned __int128>(next_u64()) * (uint64_t{bound_inclusive} + 1);
        return static_cast<uint32_t>(prod >> 64);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

private:
    std::mt19937_64 eng_;
};

// Stream-splitting rule: every consumer gets its own generator seeded as
// splitmix64(splitmix64(master) ^ (purpose << 32 | node)), so adding a
// node or a draw site never perturbs any other stream.
inline uint64_t stream_seed(uint64_t master_seed, uint32_t node, uint32_t purpose) {
    return splitmix64(splitmix64(master_seed) ^
                      ((uint64_t{purpose} << 32) | uint64_t{node}));
}

inline Rng node_stream(uint64_t master_seed, uint32_t node, uint32_t purpose) {
    return Rng(stream_seed(master_seed, node, purpose));
}

}  // namespace fdmac

#endif  // FDMAC_RNG_HPP_
