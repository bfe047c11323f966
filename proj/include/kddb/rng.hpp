#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace kddb {

// Deterministic random source. All distributions are derived from the raw
// 64-bit output of std::mt19937_64 (whose sequence is fixed by the standard)
// through explicit arithmetic, so a given (seed, stream) pair yields the same
// draws on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent substream: seed and stream id are mixed through splitmix64
    // so that nearby ids give unrelated sequences.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
        x = splitmix64(x);
        x = splitmix64(x);
        return Rng(x);
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0,1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Gaussian via Box-Muller; u1 is shifted into (0,1] so the log is finite.
    double normal(double mu, double sd) {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        double u2 = uniform();
        double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
        return mu + sd * z;
    }

    // Uniform integer in [0, n) by rejection, bias-free.
    std::size_t uniform_index(std::size_t n) {
        std::uint64_t bound = static_cast<std::uint64_t>(n);
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return static_cast<std::size_t>(x % bound);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace kddb
