#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace narr {

// All randomized code draws from this wrapper. mt19937_64 has a fully
// specified output sequence, and the helpers below avoid the std
// distributions, whose mappings are implementation-defined; a fixed seed
// therefore reproduces bit-identical results on any platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // [0, 1)
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // [0, n), unbiased
  uint64_t below(uint64_t n) {
    const uint64_t max = std::numeric_limits<uint64_t>::max();
    const uint64_t limit = max - max % n;
    uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  int index(std::size_t n) { return static_cast<int>(below(n)); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Stable seed derivation for per-slice / per-stage / per-document streams.
uint64_t derive_seed(uint64_t base, std::string_view tag);

}  // namespace narr
