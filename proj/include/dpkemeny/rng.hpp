// Copyright 2026 The dpkemeny Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace dpkemeny {

// SplitMix64 finalizer; used to spread seeds and to derive child streams.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Hash a base seed and a list of tags into a new seed. Used for per-trial and
// per-pair stream derivation so substreams are reproducible independently of
// the order in which they are consumed.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = mix64(base);
  for (std::uint64_t t : tags) s = mix64(s ^ mix64(t));
  return s;
}

// Seeded random source. Wraps mt19937_64 and hand-rolls the samplers the
// library needs, so that a fixed seed gives a fixed sequence regardless of
// which standard-library distribution implementation is in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, n). Rejection sampling keeps it exactly uniform.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Zero-centered Laplace with the given scale, via inverse CDF.
  double laplace(double scale) {
    double u = uniform01() - 0.5;
    while (u == -0.5) u = uniform01() - 0.5;
    const double sign = u < 0 ? -1.0 : 1.0;
    return -scale * sign * std::log(1.0 - 2.0 * std::abs(u));
  }

  // Zero-centered Gaussian via Box-Muller (no spare caching, so copies of an
  // Rng stay in lockstep).
  double normal(double stddev) {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return stddev * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  // Child stream independent of this one; deterministic in (seed, tag).
  Rng derive(std::uint64_t tag) const { return Rng(derive_seed(seed_, {tag})); }
  Rng derive(std::uint64_t tag_a, std::uint64_t tag_b) const {
    return Rng(derive_seed(seed_, {tag_a, tag_b}));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace dpkemeny
