#pragma once

#include <cstdint>
#include <random>

namespace commons {

/// Deterministic uniform source. mt19937_64 output is pinned by the standard
/// and the double conversion avoids std::uniform_real_distribution, whose
/// stream is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (static_cast<double>(hi - lo) + 1.0));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace commons
