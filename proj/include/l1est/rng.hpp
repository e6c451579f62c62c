#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace l1est {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3", SC'11). Output is a pure function of (counter, key).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;
    static Counter block(Counter ctr, Key key) noexcept;
};

/// Identifies one independent random stream under a seed.
enum class StreamDomain : std::uint8_t {
    Noise = 1,      // observation noise z_i in y = theta + z
    Theta = 2,      // draws of theta from a random family
    Split = 3,      // auxiliary normals for sample splitting
    Selftest = 4,
};

/// Packs (domain, scenario, replication) into the upper counter words.
constexpr std::uint64_t stream_id(StreamDomain domain, std::uint32_t scenario,
                                  std::uint32_t replication) noexcept {
    return (static_cast<std::uint64_t>(domain) << 56) |
           (static_cast<std::uint64_t>(scenario & 0xFFFFFFu) << 32) | replication;
}

/// Counter-based generator: every variate is addressed by (seed, stream, index),
/// so results do not depend on how work is split across threads.
///
/// Uniforms use 53 bits of one 64-bit half of a Philox block. Normals use the
/// Box-Muller transform on both halves of block index/2; the cosine branch
/// serves even indices and the sine branch odd ones.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    std::uint64_t seed() const noexcept {
        return (static_cast<std::uint64_t>(key_[1]) << 32) | key_[0];
    }

    /// Raw 128 bits for (stream, block).
    Philox4x32::Counter raw(std::uint64_t stream, std::uint64_t block) const noexcept;

    /// Uniform on [0, 1).
    double uniform(std::uint64_t stream, std::uint64_t index) const noexcept;

    /// Standard normal.
    double normal(std::uint64_t stream, std::uint64_t index) const noexcept;

    /// out[j] = normal(stream, first + j).
    void fill_normal(std::uint64_t stream, std::uint64_t first, std::span<double> out) const noexcept;

private:
    Philox4x32::Key key_;
};

/// Name recorded in output metadata; changes whenever the sampling method does.
inline constexpr std::string_view kSamplerName = "philox4x32-10/box-muller";

/// SplitMix64 finaliser, used to derive child seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace l1est
