#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace prominence {

/// Name of the generator recipe recorded in every report. Bump the suffix
/// whenever the draws produced for a given seed change.
inline constexpr const char* kRngAlgorithm = "xoshiro256**+splitmix64-derive/v1";

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// 64-bit FNV-1a over the bytes of `s`.
std::uint64_t fnv1a64(std::string_view s) noexcept;

/// Child seed for a numbered stream (bootstrap shard, simulation repeat...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Child seed keyed by a string such as a document id.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) noexcept;

/// xoshiro256** with its state filled from a SplitMix64 sequence. Every
/// transform to uniform, bounded, normal or exponential draws lives here so
/// results do not depend on the standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept;

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound); throws std::invalid_argument for 0.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
        // Lemire's multiply-shift with rejection; unbiased.
        __extension__ using u128 = unsigned __int128;
        u128 m = static_cast<u128>(next_u64()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<u128>(next_u64()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal via Box-Muller (one value per call, no caching).
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Exponential with the given rate.
    double exponential(double rate = 1.0);

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace prominence
