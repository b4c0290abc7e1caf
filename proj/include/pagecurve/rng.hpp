// Copyright 2026 The pagecurve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PAGECURVE_RNG_HPP
#define PAGECURVE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "pagecurve/core.hpp"

namespace pagecurve {

/// All randomness flows through this engine. mt19937_64 output is fixed by
/// the standard, and the transforms below avoid the implementation-defined
/// std:: distributions, so circuits built from a seed are identical on every
/// platform.
using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char ch : tag) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Node in a keyed tree of random substreams. Every (realization, layer,
/// gate) tuple gets its own key derived from the master seed, so results do
/// not depend on the order in which tasks execute.
class StreamKey {
 public:
  constexpr explicit StreamKey(std::uint64_t seed) : value_(splitmix64(seed)) {}

  constexpr StreamKey child(std::uint64_t index) const {
    return StreamKey(Raw{}, splitmix64(value_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
  }
  constexpr StreamKey child(std::string_view tag) const { return child(hash_tag(tag)); }

  template <class First, class... Rest>
  constexpr StreamKey child(First first, Rest... rest) const
    requires(sizeof...(Rest) > 0)
  {
    return child(first).child(rest...);
  }

  Engine engine() const { return Engine(value_); }
  constexpr std::uint64_t value() const { return value_; }

 private:
  struct Raw {};
  constexpr StreamKey(Raw, std::uint64_t v) : value_(v) {}
  std::uint64_t value_;
};

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Complex normal with E|z|^2 = 1 (Box-Muller on two uniforms).
inline Complex complex_normal(Engine& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-std::log(u1));
  return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
}

inline double standard_normal(Engine& rng) {
  return std::sqrt(2.0) * complex_normal(rng).real();
}

/// Uniform integer in [0, n) by rejection; n must be positive.
inline std::uint64_t uniform_index(Engine& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace pagecurve

#endif  // PAGECURVE_RNG_HPP
