// Copyright 2026 The fastrpca Authors.
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

#ifndef FASTRPCA_RNG_H_
#define FASTRPCA_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fastrpca::rng {

// Counter-based draws: every value is a pure function of
// (seed, stream, i, j), so results do not depend on visiting order.

// SplitMix64 finalizer.
constexpr std::uint64_t Mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t Key(std::uint64_t seed, std::uint64_t stream,
                            std::uint64_t i, std::uint64_t j) {
  return Mix(Mix(Mix(Mix(seed) ^ stream) ^ i) ^ j);
}

// Uniform in the open interval (0, 1), 53 bits.
inline double Uniform(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t i, std::uint64_t j) {
  const std::uint64_t bits = Key(seed, stream, i, j) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two independent counter draws.
inline double Gaussian(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t i, std::uint64_t j) {
  const double u1 = Uniform(seed, stream, i, 2 * j);
  const double u2 = Uniform(seed, stream, i, 2 * j + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Stream identifiers shared across modules.
enum Stream : std::uint64_t {
  kSvdStart = 1,
  kFactorA = 2,
  kFactorB = 3,
  kCorruptionSupport = 4,
  kCorruptionValue = 5,
  kObservation = 6,
};

}  // namespace fastrpca::rng

#endif  // FASTRPCA_RNG_H_
