#include "pinlock/random.hpp"

#include <cmath>

namespace pinlock {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ull;
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      key_(mix64(master_seed ^ mix64(stream_index * kStreamSalt + kGolden))) {}

std::uint64_t RandomStream::next_u64() {
    // Two finalizer rounds keyed on both sides of the counter; one round of
    // SplitMix over (key + c*golden) alone would let streams overlap as shifts.
    const std::uint64_t c = counter_++;
    return mix64(mix64(key_ + (c + 1) * kGolden) ^ key_);
}

double RandomStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open01() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double RandomStream::normal() {
    for (;;) {
        const double u = 2.0 * uniform01() - 1.0;
        const double v = 2.0 * uniform01() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t index) {
    return RandomStream(master_seed, index);
}

}  // namespace pinlock
