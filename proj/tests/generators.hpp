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

#include <cmath>
#include <vector>

#include "unital/channels.hpp"
#include "unital/random.hpp"

namespace unital_test {

using namespace unital;

/// exp(-i theta/2 n.sigma) for a (not necessarily normalized) axis.
inline CMatrix rot(double theta, double nx, double ny, double nz) {
  const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  nx /= norm;
  ny /= norm;
  nz /= norm;
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  CMatrix m(2, 2);
  m(0, 0) = Complex(c, -s * nz);
  m(0, 1) = Complex(-s * ny, -s * nx);
  m(1, 0) = Complex(s * ny, -s * nx);
  m(1, 1) = Complex(c, s * nz);
  return m;
}

/// F(j, i) = u_j u_i^dagger under a Haar s-matrix. Satisfies the unitarity
/// constraints for any unitary s and any unitaries u_j, and is generically
/// not unital.
inline EnergyBlock random_rotation_block(Rng& rng, Index dim_sys,
                                         Index dim_res) {
  EnergyBlock block;
  block.energy_label = "rotation";
  block.dim_sys = dim_sys;
  block.weight = 1.0;
  block.s_matrix = rng.haar_unitary(dim_sys);
  std::vector<CMatrix> u;
  u.reserve(static_cast<std::size_t>(dim_sys));
  for (Index j = 0; j < dim_sys; ++j) u.push_back(rng.haar_unitary(dim_res));
  for (Index j = 0; j < dim_sys; ++j) {
    for (Index i = 0; i < dim_sys; ++i) {
      block.f_family[{j, i}] =
          u[static_cast<std::size_t>(j)] *
          u[static_cast<std::size_t>(i)].adjoint();
    }
  }
  return block;
}

/// F(j, i) = diag_r s_r(j, i) for Haar per-position unitaries s_r; always
/// unital because diagonal families commute.
inline EnergyBlock random_diagonal_block(Rng& rng, Index dim_sys,
                                         Index dim_res) {
  EnergyBlock block;
  block.energy_label = "diagonal";
  block.dim_sys = dim_sys;
  block.weight = 1.0;
  block.s_matrix = CMatrix::Ones(dim_sys, dim_sys);
  std::vector<CMatrix> s_r;
  s_r.reserve(static_cast<std::size_t>(dim_res));
  for (Index r = 0; r < dim_res; ++r) s_r.push_back(rng.haar_unitary(dim_sys));
  for (Index j = 0; j < dim_sys; ++j) {
    for (Index i = 0; i < dim_sys; ++i) {
      CMatrix f = CMatrix::Zero(dim_res, dim_res);
      for (Index r = 0; r < dim_res; ++r) {
        f(r, r) = s_r[static_cast<std::size_t>(r)](j, i);
      }
      block.f_family[{j, i}] = f;
    }
  }
  return block;
}

/// Generic channel: Stinespring dilation of a Haar unitary against a random
/// reservoir state (mixed or pure).
inline KrausChannel random_channel(Rng& rng, Index dim_sys, Index dim_res,
                                   bool pure_reservoir = false) {
  const CMatrix u = rng.haar_unitary(dim_sys * dim_res);
  const DensityMatrix pi =
      pure_reservoir ? rng.pure_density(dim_res) : rng.density(dim_res);
  return channel_from_stinespring(u, pi, dim_sys);
}

/// Random-unitary mixture sum_k p_k U_k rho U_k^dagger; unital by
/// construction.
inline KrausChannel random_unital_mixture(Rng& rng, Index dim,
                                          int n_unitaries) {
  std::vector<double> p(static_cast<std::size_t>(n_unitaries));
  double total = 0.0;
  for (auto& w : p) {
    w = rng.uniform() + 1e-3;
    total += w;
  }
  std::vector<CMatrix> ops;
  ops.reserve(p.size());
  for (const double w : p) {
    ops.push_back(std::sqrt(w / total) * rng.haar_unitary(dim));
  }
  return make_kraus_channel(std::move(ops));
}

}  // namespace unital_test
