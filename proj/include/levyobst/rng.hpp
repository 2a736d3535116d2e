#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace levyobst {

/// Philox4x32-10 counter-based generator.
///
/// A stream is (key, counter); the key is derived from the master seed and
/// a stream id, the counter advances per block. Draw k of stream i is a pure
/// function of (seed, i, k), so path streams are independent of ensemble
/// size, worker count, and evaluation order.
class Philox4x32 {
public:
    using block_t = std::array<std::uint32_t, 4>;

    Philox4x32(std::uint64_t master_seed, std::uint64_t stream_id) {
        // splitmix64 whitening of (seed, stream) into the 64-bit key
        std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        key_[0] = static_cast<std::uint32_t>(z);
        key_[1] = static_cast<std::uint32_t>(z >> 32);
        counter_ = {0u, 0u,
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
        idx_ = 4;  // force generation on first draw
    }

    /// Raw block function: ten rounds over an explicit counter/key.
    static block_t bijection(block_t ctr, std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            ctr = single_round(ctr, key);
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }

    std::uint32_t next_u32() {
        if (idx_ >= 4) {
            out_ = bijection(counter_, key_);
            // 64-bit block counter in words 0..1
            if (++counter_[0] == 0) ++counter_[1];
            idx_ = 0;
        }
        return out_[idx_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t lo = next_u32();
        std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform on [2^-54, 1 - 2^-54], safe for logs on either side.
    double uniform() {
        double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        if (u <= 0.0) return 0x1.0p-54;
        if (u >= 1.0) return 1.0 - 0x1.0p-54;
        return u;
    }

private:
    static block_t single_round(const block_t& ctr, const std::array<std::uint32_t, 2>& key) {
        const std::uint64_t p0 = 0xD2511F53ULL * ctr[0];
        const std::uint64_t p1 = 0xCD9E8D57ULL * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }

    std::array<std::uint32_t, 2> key_{};
    block_t counter_{};
    block_t out_{};
    int idx_;
};

/// Per-path random stream with the distributions the simulator needs.
/// All samplers are implemented here (not std::) so that streams are
/// bit-stable across standard libraries.
class PathRng {
public:
    PathRng(std::uint64_t master_seed, std::uint64_t stream_id) : gen_(master_seed, stream_id) {}

    double uniform() { return gen_.uniform(); }

    /// Box-Muller, no caching: two uniforms per normal.
    double normal() {
        const double u1 = gen_.uniform();
        const double u2 = gen_.uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    double exponential(double rate) { return -std::log(1.0 - gen_.uniform()) / rate; }

    /// Marsaglia-Tsang; shape < 1 boosted via G(a) = G(a+1) * U^{1/a}.
    double gamma(double shape, double scale) {
        if (shape < 1.0) {
            const double u = gen_.uniform();
            return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = gen_.uniform();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v * scale;
        }
    }

private:
    Philox4x32 gen_;
};

}  // namespace levyobst
