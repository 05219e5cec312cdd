#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace rmcpd {

// Counter-based PRNG (Philox4x32-10). Every consumer derives its own stream
// from (seed, stream_id), so parallel work is schedule-independent: the value
// sequence of a stream depends only on the seed, the stream id, and the draw
// index. Normal variates use Box-Muller on 53-bit uniforms, two uniforms per
// pair, so the draw order is platform-independent as well.
class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

    std::uint32_t next_u32() {
        if (idx_ == 4) {
            fill_block();
            idx_ = 0;
        }
        return buf_[idx_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    // Standard normal via Box-Muller; consumes two uniforms per generated pair.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Uniform integer in [0, bound) by rejection; bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return r % bound;
    }

private:
    static std::pair<std::uint32_t, std::uint32_t> mulhilo(std::uint32_t a, std::uint32_t b) {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        return {static_cast<std::uint32_t>(p >> 32), static_cast<std::uint32_t>(p)};
    }

    void fill_block() {
        std::array<std::uint32_t, 4> c = ctr_;
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            const auto [hi0, lo0] = mulhilo(0xD2511F53u, c[0]);
            const auto [hi1, lo1] = mulhilo(0xCD9E8D57u, c[2]);
            c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        buf_ = c;
        if (++ctr_[0] == 0 && ++ctr_[1] == 0) ++ctr_[2];  // 96-bit draw counter
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> buf_{};
    int idx_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Stream-id namespaces for the independent Philox streams used by the library.
namespace streams {
inline constexpr std::uint64_t generator_individual = 1ull << 40;  // + individual index
inline constexpr std::uint64_t permutation_replicate = 2ull << 40; // + replicate index
inline constexpr std::uint64_t simulation_replicate = 3ull << 40;  // + setting*2^20 + replicate
}  // namespace streams

// splitmix64, used to mix user seeds with domain tags into fresh 64-bit seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace rmcpd
