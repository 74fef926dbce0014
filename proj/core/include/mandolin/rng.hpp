#pragma once

#include <cstdint>
#include <random>

namespace mandolin {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seeds derived for independent streams (pipeline stages, Gibbs chains).
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 1));
}

// mt19937_64 with bit-reproducible uniform doubles in [0,1).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), n >= 1.
  uint64_t next_below(uint64_t n) {
    // Rejection-free modulo is fine here: n is tiny relative to 2^64 in all
    // call sites, and reproducibility matters more than the <1e-15 bias.
    return engine_() % n;
  }

  bool next_bool() { return (engine_() & 1) != 0; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mandolin
