#pragma once

#include <array>
#include <cstdint>

namespace shelving {

/// Philox4x32-10 counter-based generator (Salmon et al. 2011).
/// Every (key, counter) pair maps to four independent 32-bit words.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }
};

/// Uniform stream for one trajectory: key = seed, counter = (index, stream, slot).
/// `draw(index, slot)` gives two doubles in (0, 1) with 53-bit resolution.
class TrajectoryRng {
public:
    TrajectoryRng() = default;
    TrajectoryRng(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(static_cast<std::uint32_t>(stream)) {}

    struct Pair {
        double first, second;
    };

    Pair draw(std::uint64_t index, std::uint32_t slot) const {
        const auto w = Philox4x32::generate(
            {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream_, slot},
            key_);
        return {to_unit(w[0], w[1]), to_unit(w[2], w[3])};
    }

    /// Sequential use: advances an internal counter.
    Pair next() { return draw(counter_++, 0xFFFF'FFFFu); }

    bool operator==(const TrajectoryRng&) const = default;

private:
    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    Philox4x32::Key key_{};
    std::uint32_t stream_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace shelving
