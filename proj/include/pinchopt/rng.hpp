#ifndef PINCHOPT_RNG_HPP
#define PINCHOPT_RNG_HPP

#include <cstdint>

namespace pinchopt {

// Deterministic 64-bit generator (splitmix64). Chosen over std engines so
// that streams are reproducible bit-for-bit across compilers and platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // [0, 1) with 53 random bits
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

private:
    std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace detail

// Counter-based stream split: maps (seed, a, b) to an independent stream
// seed. Used to key per-trial and per-scheme streams so that any work item
// can be regenerated in isolation, independent of execution order.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = detail::mix64(seed + 0x9E3779B97F4A7C15ULL);
    s = detail::mix64(s ^ detail::mix64(a + 0xD1B54A32D192ED03ULL));
    s = detail::mix64(s ^ detail::mix64(b + 0x8CB92BA72F3D8DD7ULL));
    return s;
}

} // namespace pinchopt

#endif
