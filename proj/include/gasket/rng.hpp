#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gasket {

// Deterministic RNG used throughout: mt19937_64 plus hand-rolled variate
// transforms, so that streams are reproducible independently of the standard
// library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix(seed)) {}

    // Derive an independent stream: master seed + counter.
    static Rng stream(std::uint64_t master, std::uint64_t index);

    std::uint64_t bits() { return engine_(); }

    // Uniform on (0,1), 53-bit, never exactly 0 or 1.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    // Uniform integer in [0, n), rejection sampled (exact, portable).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    double exponential() { return -std::log(uniform()); }

    // Poisson via sum of exponential interarrivals; fine for desk-scale means.
    long poisson(double mean) {
        long n = 0;
        double acc = exponential();
        while (acc <= mean) {
            ++n;
            acc += exponential();
        }
        return n;
    }

  private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

// Counter-based seed derivation matching Rng::stream (recorded in manifests).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return master + 0x9e3779b97f4a7c15ULL * (index + 1);
}

inline Rng Rng::stream(std::uint64_t master, std::uint64_t index) {
    return Rng(derive_seed(master, index));
}

}  // namespace gasket
