#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ztis {

/// Identifies one reproducible random stream: a master seed shared by a whole
/// experiment plus a stream id (replica index). Distinct pairs give
/// statistically independent streams, identical pairs give bit-identical ones.
struct RngSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

/// Deterministic random stream. Wraps mt19937_64 but performs all variate
/// generation itself so that results are bit-reproducible across standard
/// library implementations.
class Rng {
public:
    Rng(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(master_seed),
            static_cast<std::uint32_t>(master_seed >> 32),
            static_cast<std::uint32_t>(stream_id),
            static_cast<std::uint32_t>(stream_id >> 32),
        };
        gen_.seed(seq);
    }

    explicit Rng(const RngSpec& spec) : Rng(spec.master_seed, spec.stream_id) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Unbiased uniform integer in [0, n). Lemire multiply-shift with rejection.
    std::uint64_t uniform_index(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(gen_()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(gen_()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Exponential holding time with the given total rate (> 0).
    double exponential(double rate) {
        return -std::log1p(-uniform()) / rate;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Fair tie-breaking coin.
    bool coin() { return (gen_() & 1u) != 0; }

private:
    std::mt19937_64 gen_;
};

inline Rng make_rng(const RngSpec& spec) { return Rng(spec); }

} // namespace ztis
