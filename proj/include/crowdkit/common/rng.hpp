#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace crowdkit {

// splitmix64 step. Small, fast, passes BigCrush as a 64-bit mixer; we use it
// both as the generator core and to derive independent stream seeds, so that
// seeded runs are reproducible byte-for-byte across platforms (the stdlib
// distributions make no such guarantee).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive a child seed from a master seed and a label (e.g. "detect/s1/f42").
// FNV-1a over the label, folded into the master, then one mixing step.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::uint64_t s = master ^ h;
    return splitmix64_next(s);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = master;
    s ^= 0x9e3779b97f4a7c15ULL + splitmix64_next(a);
    s ^= splitmix64_next(b) + (s << 6) + (s >> 2);
    return splitmix64_next(s);
}

// Deterministic pseudo-random stream. uniform() is in [0, 1).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via Box-Muller (cached pair member).
    double normal();

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace crowdkit
