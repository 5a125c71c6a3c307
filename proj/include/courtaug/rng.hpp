#pragma once

#include <cstdint>

namespace courtaug {

namespace detail {
inline std::uint64_t splitmix_fmix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}
} // namespace detail

// Counter-based splitmix64 stream. Identical seed -> identical stream,
// on every platform; distributions below avoid <random> on purpose
// (libstdc++/libc++ disagree on distribution algorithms).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return detail::splitmix_fmix(state_);
    }

    // Uniform in [0, 1).
    double next_double() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound). bound must be > 0.
    std::uint32_t uniform_u32(std::uint32_t bound) {
        return std::uint32_t((std::uint64_t(std::uint32_t(next_u64())) * bound) >> 32);
    }

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        if (hi <= lo) return lo;
        return lo + int(uniform_u32(std::uint32_t(hi - lo) + 1u));
    }

    double uniform_real(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Derives an independent stream for a (seed, id, counter) triple;
    // used to give every (image, variant) unit its own stream.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t id,
                                std::uint64_t counter) {
        std::uint64_t h = detail::splitmix_fmix(seed + 0x9E3779B97F4A7C15ULL);
        h = detail::splitmix_fmix(h ^ (id + 0xD1B54A32D192ED03ULL));
        h = detail::splitmix_fmix(h ^ (counter + 0x8CB92BA72F3D8DD7ULL));
        return h;
    }

private:
    std::uint64_t state_;
};

} // namespace courtaug
