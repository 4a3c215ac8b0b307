#pragma once

#include <cstdint>
#include <random>

#include "wbansec/bytes.hpp"

namespace wbansec {

// splitmix64 step; used to derive independent substream seeds from one master
// seed so that runs stay reproducible when components draw in parallel.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

// Deterministic RNG.  mt19937_64 has a standardized output sequence, so golden
// vectors generated with a fixed seed are portable across toolchains.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n), n >= 1, via rejection sampling (no modulo bias).
  std::uint64_t below(std::uint64_t n);

  // Uniform double in [0, 1) with 53-bit resolution.
  double unit();

  // Gaussian via Box-Muller; the spare value is cached.
  double gaussian(double mean, double stddev);

  Bytes bytes(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace wbansec
