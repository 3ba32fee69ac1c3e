#pragma once

#include <cstdint>

namespace gsw {

// splitmix64 finalizer; cheap, well distributed, identical on every platform.
inline uint64_t splitmix64_mix(uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic stream cipher built on splitmix64. Randomness is keyed, not
// stateful across subsystems: every consumer derives its own stream from
// (seed, salt, frame, index, ...) so draws never depend on evaluation order,
// thread count, or how many other effects ran first.
class Rng {
public:
    explicit Rng(uint64_t stream) : state_(stream) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return splitmix64_mix(state_);
    }

    // Uniform in [0, 1), 53-bit mantissa, bit-stable across platforms.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    uint64_t state_;
};

inline uint64_t hash_combine(uint64_t h, uint64_t k) {
    return splitmix64_mix(h ^ (k + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

// Fold an arbitrary key sequence into a stream id for Rng.
template <class... Keys>
uint64_t stream_key(uint64_t seed, Keys... keys) {
    uint64_t h = splitmix64_mix(seed + 0x9e3779b97f4a7c15ull);
    ((h = hash_combine(h, static_cast<uint64_t>(keys))), ...);
    return h;
}

// Salts keep unrelated subsystems on disjoint streams even for equal frame
// and index keys.
namespace rng_salt {
inline constexpr uint64_t kEmit = 0x45;
inline constexpr uint64_t kSandClone = 0x5c;
inline constexpr uint64_t kSandScale = 0x55;
inline constexpr uint64_t kSandRest = 0x5a;
}  // namespace rng_salt

}  // namespace gsw
