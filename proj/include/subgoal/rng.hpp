#pragma once

#include <cstdint>
#include <random>

namespace subgoal {

/// mt19937_64 with hand-rolled draws so sequences are identical across
/// standard libraries (std::uniform_*_distribution is implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform index in [0, n). Requires n > 0.
    std::size_t index(std::size_t n) {
        auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t next() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent per-seed streams.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace subgoal
