#include "l1est/rng.hpp"

#include <cmath>
#include <numbers>

namespace l1est {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

inline double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits >> 11) * kTwoPow53Inv;
}

inline Philox4x32::Counter make_counter(std::uint64_t stream, std::uint64_t block) noexcept {
    return {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
            static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
}

// Box-Muller on one block; u1 is shifted to (0, 1] so the log is finite.
inline void box_muller(const Philox4x32::Counter& r, double& a, double& b) noexcept {
    const double u1 = to_unit(r[0], r[1]) + kTwoPow53Inv;
    const double u2 = to_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    a = radius * std::cos(angle);
    b = radius * std::sin(angle);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

Philox4x32::Counter CounterRng::raw(std::uint64_t stream, std::uint64_t block) const noexcept {
    return Philox4x32::block(make_counter(stream, block), key_);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t index) const noexcept {
    const auto r = raw(stream, index >> 1);
    return (index & 1u) ? to_unit(r[2], r[3]) : to_unit(r[0], r[1]);
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t index) const noexcept {
    double a, b;
    box_muller(raw(stream, index >> 1), a, b);
    return (index & 1u) ? b : a;
}

void CounterRng::fill_normal(std::uint64_t stream, std::uint64_t first, std::span<double> out) const noexcept {
    std::size_t j = 0;
    std::uint64_t index = first;
    if (!out.empty() && (index & 1u)) {
        out[j++] = normal(stream, index++);
    }
    for (; j + 1 < out.size(); j += 2, index += 2) {
        box_muller(raw(stream, index >> 1), out[j], out[j + 1]);
    }
    if (j < out.size()) out[j] = normal(stream, index);
}

}  // namespace l1est
