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

#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "unital/linalg.hpp"
#include "unital/random.hpp"

using namespace unital;
using unital_test::rot;

namespace {

const Complex kI(0.0, 1.0);

CMatrix sigma_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix sigma_y() {
  CMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

}  // namespace

TEST_CASE("approx_equal compares shape and entries") {
  CMatrix a = CMatrix::Identity(2, 2);
  CMatrix b = a;
  b(0, 1) = Complex(1e-13, 0.0);
  CHECK(approx_equal(a, b, 1e-12));
  CHECK_FALSE(approx_equal(a, b, 1e-14));
  CHECK_FALSE(approx_equal(a, CMatrix::Identity(3, 3), 1.0));
}

TEST_CASE("defect measures") {
  CHECK(hermiticity_defect(sigma_x()) == 0.0);
  CMatrix skew(2, 2);
  skew << 0, 1, -1, 0;
  CHECK(hermiticity_defect(skew) == doctest::Approx(2.0));
  CHECK(unitarity_defect(sigma_y()) <= 1e-15);
  CHECK(unitarity_defect(2.0 * sigma_y()) == doctest::Approx(3.0));
  CMatrix tall(3, 2);
  CHECK(unitarity_defect(tall) == 1.0);
}

TEST_CASE("eigendecomposition of known operators") {
  const auto id = hermitian_eigendecompose(CMatrix::Identity(3, 3));
  for (Index k = 0; k < 3; ++k) {
    CHECK(id.eigenvalues[k] == doctest::Approx(1.0));
  }

  const auto sx = hermitian_eigendecompose(sigma_x());
  CHECK(sx.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(sx.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("eigendecomposition reconstructs random hermitian matrices") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const Index dim = 2 + static_cast<Index>(rng.below(6));
    const CMatrix h = rng.hermitian(dim);
    const auto eig = hermitian_eigendecompose(h);
    const CMatrix back = eig.eigenvectors *
                         eig.eigenvalues.asDiagonal().toDenseMatrix()
                             .cast<Complex>() *
                         eig.eigenvectors.adjoint();
    CHECK(approx_equal(h, back, 1e-10));
    CHECK(unitarity_defect(eig.eigenvectors) <= 1e-12);
    for (Index k = 1; k < dim; ++k) {
      CHECK(eig.eigenvalues[k - 1] <= eig.eigenvalues[k]);
    }
  }
}

TEST_CASE("eigendecomposition rejects bad input") {
  CMatrix skew(2, 2);
  skew << 0, 1, -1, 0;
  CHECK_THROWS_AS(hermitian_eigendecompose(skew), NonHermitian);
  CHECK_THROWS_AS(hermitian_eigendecompose(CMatrix(2, 3)), DimensionMismatch);
  CHECK_THROWS_AS(hermitian_eigendecompose(CMatrix(0, 0)), DimensionMismatch);
}

TEST_CASE("tensor product entry oracle") {
  const CMatrix t = tensor_product(sigma_x(), sigma_y());
  CHECK(t.rows() == 4);
  // (sigma_x x sigma_y)[(0,3)] = sigma_x(0,1) * sigma_y(0,1) = -i
  CHECK(std::abs(t(0, 3) - Complex(0.0, -1.0)) <= 1e-15);
  CHECK(std::abs(t(0, 0)) == 0.0);

  Rng rng(12);
  CMatrix a(2, 3);
  CMatrix b(3, 2);
  for (Index r = 0; r < 2; ++r) {
    for (Index c = 0; c < 3; ++c) {
      a(r, c) = rng.complex_normal();
      b(c, r) = rng.complex_normal();
    }
  }
  const CMatrix ab = tensor_product(a, b);
  REQUIRE(ab.rows() == 6);
  REQUIRE(ab.cols() == 6);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 3; ++j) {
      for (Index k = 0; k < 3; ++k) {
        for (Index l = 0; l < 2; ++l) {
          CHECK(std::abs(ab(i * 3 + k, j * 2 + l) - a(i, j) * b(k, l)) <=
                1e-15);
        }
      }
    }
  }
}

TEST_CASE("partial trace of a Bell pair is maximally mixed") {
  CVector bell = CVector::Zero(4);
  bell[0] = Complex(1.0 / std::sqrt(2.0), 0.0);
  bell[3] = bell[0];
  const CMatrix rho = bell * bell.adjoint();
  const CMatrix half = 0.5 * CMatrix::Identity(2, 2);
  CHECK(approx_equal(partial_trace(rho, 2, 2, Subsystem::reservoir), half,
                     1e-14));
  CHECK(approx_equal(partial_trace(rho, 2, 2, Subsystem::system), half,
                     1e-14));
}

TEST_CASE("partial trace undoes a tensor product") {
  Rng rng(13);
  const CMatrix a = rng.density(3).matrix();
  const CMatrix b = rng.density(2).matrix();
  const CMatrix ab = tensor_product(a, b);
  CHECK(approx_equal(partial_trace(ab, 3, 2, Subsystem::reservoir), a, 1e-14));
  CHECK(approx_equal(partial_trace(ab, 3, 2, Subsystem::system), b, 1e-14));
  CHECK(std::abs(partial_trace(ab, 3, 2, Subsystem::reservoir).trace() -
                 Complex(1.0, 0.0)) <= 1e-13);
}

TEST_CASE("partial trace validates the factorization") {
  CHECK_THROWS_AS(partial_trace(CMatrix::Identity(6, 6), 4, 2,
                                Subsystem::reservoir),
                  DimensionMismatch);
  CHECK_THROWS_AS(partial_trace(CMatrix::Zero(4, 6), 2, 2,
                                Subsystem::reservoir),
                  DimensionMismatch);
}

TEST_CASE("entropy of a frozen spectrum") {
  RVector w(2);
  w << 0.25, 0.75;
  CHECK(entropy_of_spectrum(w) ==
        doctest::Approx(0.5623351446188083).epsilon(1e-14));

  RVector uniform(4);
  uniform.setConstant(0.25);
  CHECK(entropy_of_spectrum(uniform) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("entropy clamps positivity noise and drops tiny weights") {
  RVector w(3);
  w << 1.0, -5e-13, 1e-15;
  CHECK(entropy_of_spectrum(w) == 0.0);

  RVector negative(1);
  negative << -0.5;  // far beyond noise: contributes nothing rather than NaN
  CHECK(entropy_of_spectrum(negative) == 0.0);
}

TEST_CASE("entropy is invariant under unitaries and additive over products") {
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix rho = rng.density(4).matrix();
    const CMatrix u = rng.haar_unitary(4);
    const CMatrix rotated = u * rho * u.adjoint();
    const double s0 =
        entropy_of_spectrum(hermitian_eigendecompose(rho).eigenvalues);
    const double s1 =
        entropy_of_spectrum(hermitian_eigendecompose(rotated).eigenvalues);
    CHECK(s0 == doctest::Approx(s1).epsilon(1e-10));

    const CMatrix sigma = rng.density(3).matrix();
    const double s_sigma =
        entropy_of_spectrum(hermitian_eigendecompose(sigma).eigenvalues);
    const double s_joint = entropy_of_spectrum(
        hermitian_eigendecompose(tensor_product(rho, sigma)).eigenvalues);
    CHECK(s_joint == doctest::Approx(s0 + s_sigma).epsilon(1e-10));
  }
}

TEST_CASE("rotation helper produces unitaries with the right action") {
  CHECK(unitarity_defect(rot(1.3, 0.2, -0.4, 0.9)) <= 1e-14);
  // rot(pi, x) = -i sigma_x
  CHECK(approx_equal(rot(M_PI, 1, 0, 0), (-kI * sigma_x()).eval(), 1e-14));
}
