// Copyright 2026 The unital-lab developers
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

#include "unital/density_matrix.hpp"
#include "unital/types.hpp"

namespace unital {

/// Splittable 64-bit mixing stream. Used to expand one manifest seed into
/// independent per-run seeds so sweeps stay deterministic under any
/// scheduling order.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Deterministic random source. The engine is the standard mt19937_64, whose
/// output sequence is pinned by the C++ standard; the real-valued mappings
/// are written out here rather than taken from std distributions, because
/// the standard leaves distribution algorithms implementation-defined and
/// reports must reproduce byte for byte across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent child stream; parent and child never overlap in practice.
  Rng spawn();

  std::uint64_t raw();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via the Box-Muller transform.
  double normal();
  /// Complex normal with unit total variance.
  Complex complex_normal();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  /// Haar distributed unitary (QR of a Ginibre matrix, phases fixed).
  CMatrix haar_unitary(Index dim);
  /// Complex symmetric unitary, drawn as U U^T with U Haar.
  CMatrix symmetric_unitary(Index dim);
  CMatrix hermitian(Index dim);
  CVector unit_vector(Index dim);
  /// Full-rank mixed state G G^dagger / tr, G Ginibre.
  DensityMatrix density(Index dim);
  DensityMatrix pure_density(Index dim);

 private:
  std::mt19937_64 engine_;
  SplitMix64 stream_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace unital
