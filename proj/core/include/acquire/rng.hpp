#pragma once

#include <cstdint>
#include <random>

namespace acquire {

// Every sampler in the library draws from std::mt19937_64. Its output
// sequence is fixed by the C++ standard, and the conversions below use only
// integer arithmetic plus exactly-rounded double operations, so a given seed
// reproduces the same points on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound);

  // Poisson(mean). Inversion for small means, PTRS (Hormann 1993) otherwise.
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace acquire
