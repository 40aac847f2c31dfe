#pragma once

#include <cstdint>

namespace pinlock {

/// Counter-based random stream.
///
/// Draw number `c` of stream `(master_seed, stream_index)` is a fixed hash of
/// those three integers, so any value is reproducible without replaying the
/// draws of other streams. Monte Carlo trial `j` always uses stream `j`; how the
/// trials are scheduled across threads cannot change what they see.
///
/// A stream carries its own counter and must not be shared between threads.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();

    /// Uniform on (0, 1); safe as a log() argument.
    double uniform_open01();

    /// Standard normal (Marsaglia polar method, second variate discarded).
    double normal();

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }
    std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t index);

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

}  // namespace pinlock
