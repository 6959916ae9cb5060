#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ratchet_levy {

/// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3"). Every (key, counter) pair maps to an
/// independent block of four 32-bit words, so substreams need no state
/// beyond their identifiers.
class Philox4x32 {
public:
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static counter_type block(counter_type ctr, key_type key)
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// What a substream is used for; distinct purposes never share blocks.
enum class StreamPurpose : std::uint32_t { gaussian = 0, bridge = 1, decisions = 2, jumps = 3 };

/// Uniform random bit generator over one substream identified by
/// (seed, path index, purpose). Satisfies std::uniform_random_bit_generator.
class SubstreamEngine {
public:
    using result_type = std::uint32_t;

    SubstreamEngine(std::uint64_t seed, std::uint64_t path, StreamPurpose purpose)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0u, static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(path),
               static_cast<std::uint32_t>(path >> 32)}
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    /// Uniform double in (0, 1) with 53 random bits.
    double uniform_open()
    {
        const std::uint64_t hi = (*this)() >> 5;  // 27 bits
        const std::uint64_t lo = (*this)() >> 6;  // 26 bits
        return (static_cast<double>((hi << 26) | lo) + 0.5) * 0x1.0p-53;
    }

private:
    void refill()
    {
        buf_ = Philox4x32::block(ctr_, key_);
        ++ctr_[0];
        pos_ = 0;
    }

    Philox4x32::key_type key_;
    Philox4x32::counter_type ctr_;
    Philox4x32::counter_type buf_{};
    int pos_ = 4;
};

}  // namespace ratchet_levy
