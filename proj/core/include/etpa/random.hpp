#pragma once

#include <cmath>
#include <cstdint>

#include "etpa/errors.hpp"

// Random number generation with a pinned algorithm identity, so another
// implementation can reproduce the same distributions from the same
// documented recipe (bit-exact streams are promised only within one
// build of this library):
//
//   engine      SplitMix64 (Steele, Lea and Flood, "Fast splittable
//               pseudorandom number generators", OOPSLA 2014)
//   substreams  seed(master, i, j) =
//                 mix(mix(master ^ 0x9E3779B97F4A7C15 * (i+1))
//                     ^ 0xC2B2AE3D27D4EB4F * (j+1))
//               with mix() the SplitMix64 output permutation
//   uniforms    (x >> 11) * 2^-53 in [0, 1)
//   Poisson     mean < 10: Knuth multiplication;
//               mean >= 10: Hoermann's PTRS transformed rejection
//               (the algorithm pair NumPy uses)

namespace etpa {

/// SplitMix64 output permutation, also usable as a 64-bit mixer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// SplitMix64 engine. Satisfies uniform_random_bit_generator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ull; }

  constexpr result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ull;
    return splitmix64_mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Independent substream seed for measurement point (sample_index,
/// power_index) under a master seed. Stateless, so points can be
/// simulated in any order or in parallel and merged by index.
constexpr std::uint64_t substream_seed(std::uint64_t master,
                                       std::uint64_t sample_index,
                                       std::uint64_t power_index) {
  const std::uint64_t a =
      splitmix64_mix(master ^ (0x9e3779b97f4a7c15ull * (sample_index + 1)));
  return splitmix64_mix(a ^ (0xc2b2ae3d27d4eb4full * (power_index + 1)));
}

namespace detail {

// Knuth's multiplication method; expected uniforms per draw is mean+1.
inline std::uint64_t poisson_small(SplitMix64& rng, double mean) {
  const double threshold = std::exp(-mean);
  std::uint64_t k = 0;
  double prod = rng.next_double();
  while (prod > threshold) {
    ++k;
    prod *= rng.next_double();
  }
  return k;
}

// Hoermann (1993) PTRS transformed rejection, valid for mean >= 10.
inline std::uint64_t poisson_ptrs(SplitMix64& rng, double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    const double u = rng.next_double() - 0.5;
    const double v = rng.next_double();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) {
      return static_cast<std::uint64_t>(kf);
    }
    if (kf < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    // log(v) may be -inf when v == 0; the comparison then rejects.
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + kf * loglam - std::lgamma(kf + 1.0)) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

}  // namespace detail

/// Poisson-distributed count with the given mean. Means up to 2^53 are
/// supported; beyond that, counts stop being exactly representable.
inline std::uint64_t sample_poisson(SplitMix64& rng, double mean) {
  if (!std::isfinite(mean) || mean < 0.0) {
    throw DomainError("Poisson mean must be finite and non-negative");
  }
  if (mean > 0x1.0p53) {
    throw DomainError("Poisson mean exceeds exactly representable count range");
  }
  if (mean == 0.0) {
    return 0;
  }
  return mean < 10.0 ? detail::poisson_small(rng, mean)
                     : detail::poisson_ptrs(rng, mean);
}

}  // namespace etpa
