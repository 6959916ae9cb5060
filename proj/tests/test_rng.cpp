#include <array>
#include <cstdint>
#include <set>

#include <gtest/gtest.h>

#include "ratchet_levy/rng.hpp"

using namespace ratchet_levy;

TEST(Philox, KnownAnswerZero)
{
    const auto r = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(r, (Philox4x32::counter_type{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerAllOnes)
{
    const auto r = Philox4x32::block({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u});
    EXPECT_EQ(r, (Philox4x32::counter_type{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPiDigits)
{
    const auto r = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                     {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(r, (Philox4x32::counter_type{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Substream, ReproducibleForSameIdentifiers)
{
    SubstreamEngine a(42, 7, StreamPurpose::gaussian), b(42, 7, StreamPurpose::gaussian);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Substream, DistinctIdentifiersGiveDistinctStreams)
{
    std::set<std::uint32_t> first;
    for (std::uint64_t seed : {1ull, 2ull})
        for (std::uint64_t path : {0ull, 1ull, 1ull << 33})
            for (auto p : {StreamPurpose::gaussian, StreamPurpose::bridge, StreamPurpose::decisions})
                first.insert(SubstreamEngine(seed, path, p)());
    EXPECT_EQ(first.size(), 18u);
}

TEST(Substream, UniformOpenInUnitInterval)
{
    SubstreamEngine e(3, 0, StreamPurpose::bridge);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = e.uniform_open();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.005);
}
