#pragma once
//
// Counter-based random number generation.
//
// Every random decision in the library is a pure function of (seed, counter),
// so replaying a stream with the same seed reproduces the same transcript
// bit-for-bit and the coin used at step t is independent of everything the
// adversary has seen. No generator state is carried between draws.
//

#include <cstdint>
#include <cmath>

namespace robuststream {

namespace detail {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t counter) {
    return detail::mix64(detail::mix64(seed) ^ detail::mix64(counter * 0x9e3779b97f4a7c15ULL + 1));
}

// Uniform in [0, 1).
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(counter_bits(seed, counter) >> 11) * 0x1.0p-53;
}

// Stateful view over the counter stream; cheap to copy, trivially replayable.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t cursor = 0)
        : seed_(seed), cursor_(cursor) {}

    double uniform() { return counter_uniform(seed_, cursor_++); }

    // uniform in [0, n)
    std::uint64_t index(std::uint64_t n) {
        return counter_bits(seed_, cursor_++) % n;
    }

    // standard normal via Box-Muller; consumes two counters
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t cursor() const { return cursor_; }
    void set_cursor(std::uint64_t c) { cursor_ = c; }

private:
    std::uint64_t seed_;
    std::uint64_t cursor_;
};

// Derives an independent stream, e.g. one per trial or per subsystem.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id) {
    return detail::mix64(seed ^ detail::mix64(stream_id + 0x51ed2701a319f215ULL));
}

} // namespace robuststream
