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

#include "unital/random.hpp"

#include <cmath>

#include "unital/errors.hpp"
#include "unital/linalg.hpp"

namespace unital {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(0), stream_(seed) {
  engine_.seed(stream_.next());
}

Rng Rng::spawn() { return Rng(stream_.next()); }

std::uint64_t Rng::raw() { return engine_(); }

double Rng::uniform() {
  // 53 high bits scaled into [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u = 1.0 - uniform();  // (0, 1], keeps the log finite
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  cached_normal_ = r * std::sin(kTwoPi * v);
  has_cached_normal_ = true;
  return r * std::cos(kTwoPi * v);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * 0.7071067811865475244;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error("Rng::below: bound must be positive");
  return engine_() % bound;
}

CMatrix Rng::haar_unitary(Index dim) {
  if (dim < 1) throw DimensionMismatch("haar_unitary: dim must be positive");
  CMatrix g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i, j) = complex_normal();
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the column phases so the distribution is exactly Haar.
  for (Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    const Complex phase = mag > 0.0 ? r(j, j) / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

CMatrix Rng::symmetric_unitary(Index dim) {
  const CMatrix u = haar_unitary(dim);
  return u * u.transpose();
}

CMatrix Rng::hermitian(Index dim) {
  if (dim < 1) throw DimensionMismatch("hermitian: dim must be positive");
  CMatrix g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i, j) = complex_normal();
  }
  return 0.5 * (g + g.adjoint()).eval();
}

CVector Rng::unit_vector(Index dim) {
  if (dim < 1) throw DimensionMismatch("unit_vector: dim must be positive");
  CVector v(dim);
  double norm = 0.0;
  do {
    for (Index i = 0; i < dim; ++i) v[i] = complex_normal();
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

DensityMatrix Rng::density(Index dim) {
  if (dim < 1) throw DimensionMismatch("density: dim must be positive");
  CMatrix g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i, j) = complex_normal();
  }
  CMatrix m = g * g.adjoint();
  m = (0.5 * (m + m.adjoint())).eval();
  m /= m.trace();
  return DensityMatrix(std::move(m));
}

DensityMatrix Rng::pure_density(Index dim) {
  return DensityMatrix::pure(unit_vector(dim));
}

}  // namespace unital
