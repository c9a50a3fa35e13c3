#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace smoothmax {

/// Seedable generator used everywhere reproducibility matters. The engine is
/// std::mt19937_64, whose output sequence is fixed by the standard; the
/// distributions below are implemented here (not via <random> distributions,
/// which are implementation-defined) so seeded streams match across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed)
      : engine_{seed} {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    /// Standard normal via the Box-Muller transform.
    double normal();

  private:
    std::mt19937_64       engine_;
    std::optional<double> spare_;
};

}  // namespace smoothmax
