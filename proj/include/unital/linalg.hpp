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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

#include "unital/errors.hpp"
#include "unital/types.hpp"

namespace unital {

// Shared numerical guard rails. Entropy values carry the looser tolerance
// because they pass through an eigendecomposition and a logarithm.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kSolverHermitianTol = 1e-10;
inline constexpr double kPositivityTol = 1e-12;
inline constexpr double kSpectrumCutoff = 1e-14;
inline constexpr double kConstraintTol = 1e-10;
inline constexpr double kEntropyTol = 1e-8;

/// Which tensor factor partial_trace removes. The composite index convention
/// is system-major throughout: composite = system_index * dim_res + res_index.
enum class Subsystem { system, reservoir };

/// Elementwise comparison with an absolute tolerance. Shapes must agree.
template <typename DerivedA, typename DerivedB>
bool approx_equal(const Eigen::MatrixBase<DerivedA>& a,
                  const Eigen::MatrixBase<DerivedB>& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return (a.derived() - b.derived()).cwiseAbs().maxCoeff() <= tol;
}

/// Largest elementwise deviation from M = M^dagger.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return (m.derived() - m.derived().adjoint()).cwiseAbs().maxCoeff();
}

/// Largest elementwise deviation of U^dagger U from the identity.
template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  if (u.rows() != u.cols() || u.size() == 0) return 1.0;
  Matrix<Scalar> gram = u.derived().adjoint() * u.derived();
  gram -= Matrix<Scalar>::Identity(u.rows(), u.cols());
  return gram.cwiseAbs().maxCoeff();
}

template <typename Scalar>
struct EigenDecompositionT {
  /// Ascending.
  Vector<typename Eigen::NumTraits<Scalar>::Real> eigenvalues;
  /// Columns, orthonormal.
  Matrix<Scalar> eigenvectors;
};

using EigenDecomposition = EigenDecompositionT<Complex>;

/// Spectral decomposition of a Hermitian matrix. The reconstruction
/// V diag(w) V^dagger reproduces the input to 1e-10 for the dimensions this
/// library works at (well below a few hundred).
template <typename Derived>
EigenDecompositionT<typename Derived::Scalar> hermitian_eigendecompose(
    const Eigen::MatrixBase<Derived>& m,
    double hermitian_tol = kSolverHermitianTol) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols() || m.size() == 0) {
    throw DimensionMismatch(
        "hermitian_eigendecompose: matrix must be square and nonempty");
  }
  const double defect = hermiticity_defect(m);
  if (defect > hermitian_tol) {
    throw NonHermitian("hermitian_eigendecompose: symmetry defect " +
                       std::to_string(defect) + " exceeds tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(m.derived());
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("hermitian_eigendecompose: iteration did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Kronecker product. (A x B)[(i*rB + k), (j*cB + l)] = A(i, j) * B(k, l).
template <typename DerivedA, typename DerivedB>
auto tensor_product(const Eigen::MatrixBase<DerivedA>& a,
                    const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<
      typename DerivedA::Scalar, typename DerivedB::Scalar>::ReturnType;
  Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          Scalar(a(i, j)) * b.derived().template cast<Scalar>();
    }
  }
  return out;
}

/// Trace over one tensor factor of an operator on system x reservoir.
template <typename Derived>
Matrix<typename Derived::Scalar> partial_trace(
    const Eigen::MatrixBase<Derived>& m, Index dim_sys, Index dim_res,
    Subsystem traced) {
  using Scalar = typename Derived::Scalar;
  if (dim_sys < 1 || dim_res < 1 || m.rows() != m.cols() ||
      m.rows() != dim_sys * dim_res) {
    throw DimensionMismatch("partial_trace: dimensions " +
                            std::to_string(dim_sys) + " x " +
                            std::to_string(dim_res) +
                            " do not factor a matrix of size " +
                            std::to_string(m.rows()));
  }
  if (traced == Subsystem::reservoir) {
    Matrix<Scalar> out(dim_sys, dim_sys);
    for (Index a = 0; a < dim_sys; ++a) {
      for (Index b = 0; b < dim_sys; ++b) {
        out(a, b) =
            m.derived().block(a * dim_res, b * dim_res, dim_res, dim_res)
                .trace();
      }
    }
    return out;
  }
  Matrix<Scalar> out = Matrix<Scalar>::Zero(dim_res, dim_res);
  for (Index a = 0; a < dim_sys; ++a) {
    out += m.derived().block(a * dim_res, a * dim_res, dim_res, dim_res);
  }
  return out;
}

/// Shannon-type sum -sum_k w_k ln w_k over a probability spectrum.
/// Eigenvalues in [-1e-12, 0) are positivity noise and clamp to zero;
/// weights below 1e-14 contribute nothing (0 ln 0 := 0).
inline double entropy_of_spectrum(const Eigen::Ref<const RVector>& spectrum) {
  double s = 0.0;
  for (Index k = 0; k < spectrum.size(); ++k) {
    double w = spectrum[k];
    if (w < 0.0 && w >= -kPositivityTol) w = 0.0;
    if (w < kSpectrumCutoff) continue;
    s -= w * std::log(w);
  }
  return s;
}

}  // namespace unital
