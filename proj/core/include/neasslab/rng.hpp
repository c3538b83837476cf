#pragma once

#include <cstdint>

namespace neasslab {

// Counter-based deterministic RNG: value = mix(seed, stream, counter).
// Stateless between draws, so parallel evaluation order cannot change the
// stream assigned to a given (stream, counter) pair.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t counter) const;
  double uniform(std::uint64_t counter) const;              // [0, 1)
  double normal(std::uint64_t counter) const;               // Box-Muller
  double uniform_in(std::uint64_t counter, double lo, double hi) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace neasslab
