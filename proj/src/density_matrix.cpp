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

#include "unital/density_matrix.hpp"

#include <cmath>
#include <utility>

namespace unital {

DensityMatrix::DensityMatrix(CMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.size() == 0) {
    throw DimensionMismatch("DensityMatrix: matrix must be square and nonempty");
  }
  const double herm = hermiticity_defect(matrix_);
  if (herm > kHermitianTol) {
    throw InvalidState("DensityMatrix: Hermiticity defect " +
                       std::to_string(herm) + " exceeds 1e-12");
  }
  const double trace_err = std::abs(matrix_.trace() - Complex(1.0, 0.0));
  if (trace_err > kHermitianTol) {
    throw InvalidState("DensityMatrix: trace deviates from one by " +
                       std::to_string(trace_err));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("DensityMatrix: spectrum did not converge");
  }
  const double lowest = solver.eigenvalues().minCoeff();
  if (lowest < -kPositivityTol) {
    throw InvalidState("DensityMatrix: negative eigenvalue " +
                       std::to_string(lowest));
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  if (dim < 1) throw DimensionMismatch("maximally_mixed: dim must be positive");
  CMatrix m = CMatrix::Identity(dim, dim) * (1.0 / static_cast<double>(dim));
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const CVector& state) {
  const double norm = state.norm();
  if (state.size() == 0 || norm < 1e-300) {
    throw InvalidState("pure: state vector must be nonzero");
  }
  CVector psi = state / norm;
  return DensityMatrix(psi * psi.adjoint());
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const auto eig = hermitian_eigendecompose(rho.matrix());
  return entropy_of_spectrum(eig.eigenvalues);
}

}  // namespace unital
