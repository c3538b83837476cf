#include "neasslab/rng.hpp"

#include <cmath>

namespace neasslab {

namespace {
// splitmix64 finalizer; statistically solid for simulation seeding.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return mix(mix(mix(seed_) ^ stream_) ^ counter);
}

double CounterRng::uniform(std::uint64_t counter) const {
  // 53 high bits -> double in [0, 1).
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const {
  // Two sub-draws per counter; clamp away from 0 for the log.
  double u1 = uniform(2 * counter);
  double u2 = uniform(2 * counter + 1);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double CounterRng::uniform_in(std::uint64_t counter, double lo, double hi) const {
  return lo + (hi - lo) * uniform(counter);
}

}  // namespace neasslab
