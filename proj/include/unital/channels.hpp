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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unital/density_matrix.hpp"
#include "unital/linalg.hpp"
#include "unital/types.hpp"

namespace unital {

/// A channel in Kraus form: Phi(rho) = sum_a K_a rho K_a^dagger.
/// Build through make_kraus_channel or channel_from_stinespring; both verify
/// the completeness relation sum_a K_a^dagger K_a = 1 to 1e-10.
struct KrausChannel {
  Index dim = 0;
  std::vector<CMatrix> kraus_ops;
};

KrausChannel make_kraus_channel(std::vector<CMatrix> ops,
                                double tol = kConstraintTol);

/// Largest deviation of sum_a K_a^dagger K_a from the identity.
double completeness_defect(const KrausChannel& phi);

/// One fixed-energy subspace of an energy-isolated system coupled to a
/// reservoir. The joint evolution restricted to the block is
///   U = sum_{j,i} s(j, i) |j><i| (x) F(j, i),
/// with s the system scattering matrix and F(j, i) operators on the
/// reservoir. `weight` is the probability mass the initial state puts on
/// this block; weights across a block list sum to one.
struct EnergyBlock {
  std::string energy_label;
  Index dim_sys = 0;
  double weight = 0.0;
  CMatrix s_matrix;
  /// Keyed (j, i) with j the outgoing and i the incoming system index.
  /// Pairs whose s entry vanishes may be omitted.
  std::map<std::pair<Index, Index>, CMatrix> f_family;

  bool has_f(Index j, Index i) const;
  const CMatrix& f(Index j, Index i) const;
  /// Shared reservoir dimension of the family. Throws if the family is
  /// empty or inconsistent.
  Index dim_res() const;
};

/// The composite unitary of the block in the system-major basis:
/// U[(j * dim_res + m), (i * dim_res + n)] = s(j, i) * F(j, i)(m, n).
CMatrix assemble_grand_unitary(const EnergyBlock& block);

struct UnitarityCheck {
  bool pass = false;
  double max_violation = 0.0;
};

/// Evaluates both closure conditions on the scattering data,
///   sum_i conj(s(i, j')) s(i, j) F(i, j')^dagger F(i, j) = delta_{j j'} 1,
///   sum_i s(j, i) conj(s(j', i)) F(j, i) F(j', i)^dagger = delta_{j j'} 1,
/// which together are equivalent to unitarity of the assembled block.
UnitarityCheck check_unitarity_constraints(const EnergyBlock& block);

/// Kraus form of rho -> tr_R{ U (rho x pi) U^dagger }. Kraus operators are
/// K_{m,k} = sqrt(lambda_k) <m| U |e_k> over the spectral decomposition
/// pi = sum_k lambda_k |e_k><e_k|; eigenvalues below 1e-14 are dropped.
KrausChannel channel_from_stinespring(const CMatrix& u, const DensityMatrix& pi,
                                      Index dim_sys);

/// sum_a K_a M K_a^dagger for an arbitrary operator M.
CMatrix apply_channel_to_operator(const KrausChannel& phi, const CMatrix& m);

/// Channel action on a state; output is validated as a DensityMatrix.
DensityMatrix apply_channel(const KrausChannel& phi, const DensityMatrix& rho);

struct UnitalityDefect {
  /// Phi(1) - 1 = sum_a K_a K_a^dagger - 1.
  CMatrix matrix;
  double max_abs = 0.0;
};

UnitalityDefect unitality_defect(const KrausChannel& phi);

/// Pairwise reservoir commutator averages
///   D(j, j') = sum_i s(j, i) conj(s(j', i))
///              tr{ pi [F(j', i)^dagger, F(j, i)] }.
/// When the block satisfies the unitarity constraints, 1 + D equals
/// Phi(1) on the block, so D == 0 is exactly the unital case.
struct CriterionDefect {
  CMatrix matrix;
  double max_abs = 0.0;

  Complex value(Index j, Index jp) const { return matrix(j, jp); }
};

/// Throws ConstraintViolation when check_unitarity_constraints fails.
CriterionDefect unitality_criterion_defect(const EnergyBlock& block,
                                           const DensityMatrix& pi);

/// Entropies in units of k_B. eq1_bound is the channel lower bound
/// -tr{ Phi(rho) ln Phi(1) }; it is -infinity when Phi(1) is singular on
/// the support of Phi(rho), and delta_s >= eq1_bound - 1e-8 always holds
/// for a genuine channel.
struct EntropyReport {
  double s_in = 0.0;
  double s_out = 0.0;
  double delta_s = 0.0;
  double eq1_bound = 0.0;
};

EntropyReport entropy_gain(const KrausChannel& phi, const DensityMatrix& rho);

struct VerdictWitness {
  std::size_t block_index = 0;
  Index j = 0;
  Index jp = 0;
};

struct Verdict {
  bool guaranteed = false;
  std::optional<VerdictWitness> witness;
};

/// Entropy never decreases iff every block carrying state weight (> 1e-12)
/// has criterion defect at most 1e-10. Otherwise the first violating pair
/// is returned as a witness.
Verdict h_theorem_verdict(const std::vector<EnergyBlock>& blocks,
                          const std::vector<DensityMatrix>& rho_blocks,
                          const DensityMatrix& pi);

/// Grand entropy balance of a block-diagonal state rho = (+)_m w_m rho_m
/// under the blockwise channel. Because the block weights are conserved,
/// S decomposes as sum_m w_m S(rho_m) + H(w) with H(w) invariant, and the
/// lower bound adds up weight by weight.
EntropyReport blockwise_entropy_report(
    const std::vector<EnergyBlock>& blocks,
    const std::vector<DensityMatrix>& rho_blocks, const DensityMatrix& pi);

}  // namespace unital
