#include "qlrt/rng.hpp"

#include <cmath>

namespace qlrt {

namespace {

// splitmix64 finalizer (Vigna). Full-period mixing of a 64-bit counter.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t substream) {
  std::uint64_t s = mix64(master);
  s = mix64(s ^ mix64(stream + 0x632be59bd9b4e019ULL));
  s = mix64(s ^ mix64(substream + 0x9e6c63d0876a9a47ULL));
  return s;
}

double Rng::exponential(double rate) {
  // -log(1-U)/rate; 1-U stays in (0,1] so the log argument never hits zero.
  return -std::log1p(-uniform()) / rate;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 0.0) u1 = uniform();  // guard log(0); u1 = 0 has measure ~2^-53
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

}  // namespace qlrt
