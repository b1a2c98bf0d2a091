#pragma once

#include <cmath>
#include <cstdint>

namespace cuckoo {

/// SplitMix64 finalizer. Bijective mixer with full avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for substream `stream` of `master`. Trial i of an experiment uses
/// derive_seed(master_seed, i), so results never depend on scheduling order.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    return mix64(master + 0x9e3779b97f4a7c15ULL * (2 * stream + 1));
}

/// xoshiro256** generator, seeded through SplitMix64. Fixed algorithm so that
/// a given seed produces the same stream on every platform.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += 0x9e3779b97f4a7c15ULL;
            word = mix64(sm);
        }
    }

    std::uint64_t next() noexcept {
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

    /// Uniform integer in [0, bound). Lemire multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        unsigned __int128 product = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

    /// Uniform double in [0, 1).
    double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1), never returning either endpoint.
    double unit_open() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Exact Poisson(lambda) via Knuth's product method; lambda is split into
    /// chunks of at most 30 so the e^-lambda factor stays well above underflow.
    std::uint32_t poisson(double lambda) noexcept {
        std::uint32_t total = 0;
        while (lambda > 30.0) {
            total += poisson_knuth(30.0);
            lambda -= 30.0;
        }
        if (lambda > 0.0) total += poisson_knuth(lambda);
        return total;
    }

    /// Poisson(lambda) conditioned on being >= 2, by rejection.
    std::uint32_t poisson_min2(double lambda) noexcept {
        for (;;) {
            const std::uint32_t d = poisson(lambda);
            if (d >= 2) return d;
        }
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint32_t poisson_knuth(double lambda) noexcept {
        const double limit = std::exp(-lambda);
        std::uint32_t count = 0;
        double prod = unit_open();
        while (prod > limit) {
            ++count;
            prod *= unit_open();
        }
        return count;
    }

    std::uint64_t state_[4];
};

} // namespace cuckoo
