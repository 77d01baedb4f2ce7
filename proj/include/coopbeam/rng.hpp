// Copyright 2026 The coopbeam Authors
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

#pragma once

#include <cstdint>
#include <random>

#include "coopbeam/types.hpp"

namespace coopbeam {

// Seeded pseudo-random stream. Identical seeds give identical draws for
// every consumer in the library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  double normal(double mean, double stddev) { return std::normal_distribution<double>(mean, stddev)(engine_); }

  // Circularly-symmetric complex Gaussian CN(0, variance).
  Complex complex_normal(double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal(0.0, s);
    const double im = normal(0.0, s);
    return {re, im};
  }

  // Uniform integer in [0, n).
  Index index(Index n) { return std::uniform_int_distribution<Index>(0, n - 1)(engine_); }

  // Independent child stream keyed by (seed, stream id). splitmix64 finalizer.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  Rng child(std::uint64_t stream) const { return Rng(derive(seed_, stream)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace coopbeam
