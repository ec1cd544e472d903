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

#include "unital/linalg.hpp"

namespace unital {

/// A quantum state: Hermitian (to 1e-12), unit trace (to 1e-12), positive
/// semidefinite (eigenvalues >= -1e-12). Construction validates all three
/// and throws InvalidState on failure, so a DensityMatrix value can always
/// be trusted downstream.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix matrix);

  Index dim() const { return matrix_.rows(); }
  const CMatrix& matrix() const { return matrix_; }

  static DensityMatrix maximally_mixed(Index dim);

  /// Projector onto the given vector, normalized internally.
  static DensityMatrix pure(const CVector& state);

 private:
  CMatrix matrix_;
};

/// S(rho) = -tr(rho ln rho) in units of k_B (k_B = 1, natural log).
/// Always in [0, ln dim] up to solver noise.
double von_neumann_entropy(const DensityMatrix& rho);

}  // namespace unital
