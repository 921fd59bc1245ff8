#pragma once

#include <cstdint>
#include <random>

namespace qlrt {

// Splittable seeding: every (master, stream, substream) triple maps to an
// independent engine seed, so replications can run in any order on any number
// of threads and still consume identical random numbers.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t substream = 0);

// mt19937_64 plus portable variate generation. All variates are produced from
// explicit 53-bit uniforms, never from std::*_distribution, so a given seed
// yields the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Exponential with the given rate (mean 1/rate).
  double exponential(double rate);

  // Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal();

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qlrt
