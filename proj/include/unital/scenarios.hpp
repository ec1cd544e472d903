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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unital/channels.hpp"

namespace unital {

/// Spin-1/2 state given by its Bloch vector (<sx>, <sy>, <sz>).
struct SpinState {
  Eigen::Vector3d bloch = Eigen::Vector3d::Zero();

  /// (1 + bloch . sigma) / 2; throws InvalidState when |bloch| > 1.
  DensityMatrix to_density_matrix() const;
};

/// Three leads meeting at a junction, a spin-1/2 reservoir, and reservoir
/// operators F(b, a) = R_b R_a^dagger built from per-lead spin rotations.
struct ThreeLeadConfig {
  /// Common off-diagonal scattering amplitude; the diagonal is completed
  /// to a symmetric unitary.
  Complex s_offdiag = Complex(2.0 / 3.0, 0.0);
  std::array<CMatrix, 3> rotations;
  SpinState spin;
};

/// The canonical entropy-decreasing junction: rotations {1, i sx, i sy},
/// spin Bloch vector (1/3, 1/3, 1/3), off-diagonal amplitude 2/3.
ThreeLeadConfig default_three_lead_config();

enum class NSpinMode { generic, commuting_z };

/// One reservoir spin: the two alternative rotations it can apply and its
/// initial state.
struct SpinFactor {
  CMatrix u_a;
  CMatrix u_b;
  SpinState state;
};

struct NSpinConfig {
  int n_spins = 1;
  NSpinMode mode = NSpinMode::generic;
  /// Either one factor replicated across all spins or one entry per spin.
  std::vector<SpinFactor> spins;
};

enum class RefreshPolicy { fresh_every_step, reuse };

struct TlsWalkConfig {
  int n_sites = 4;
  int n_steps = 10;
  /// Probability that a scatterer is transparent.
  double tls_open_prob = 0.5;
  RefreshPolicy refresh_policy = RefreshPolicy::fresh_every_step;
  /// Seeds the initial electron pure state.
  std::uint64_t seed = 0;
  /// When set, start from this (site, direction) basis state instead of a
  /// seeded random pure state.
  std::optional<int> initial_basis_state;
};

struct ScenarioResult {
  double unitality_max_defect = 0.0;
  CriterionDefect criterion;
  /// One entry for single-shot scenarios, one per step for trajectories.
  std::vector<EntropyReport> entropy;
  /// Config echo as ordered key/value pairs.
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Completes the transmissions T12, T13, T23 into a symmetric unitary 3x3
/// scattering matrix with |s_ij|^2 = T_ij. Off-diagonals are taken real
/// positive; each diagonal is then
///   s_ii = r_i + i eta,  r_i = (s_jk s_ij s_ik / 2)(1/T_jk - 1/T_ij - 1/T_ik)
/// with one shared imaginary offset eta fixed by the row norms. Throws
/// NotCompletable when no unitary completion exists within 1e-8.
CMatrix symmetric_three_lead_smatrix(double t12, double t13, double t23);

/// The spin demon junction. Builds the in-shell block and its pass-through
/// partner, cross-checks the commutator criterion against the dilation
/// channel, and reports the grand entropy balance for maximally mixed lead
/// occupation.
ScenarioResult three_lead_demon(const ThreeLeadConfig& cfg);

/// One-dimensional scatterer with a slow reservoir degree of freedom:
/// transmission leaves the reservoir alone, left and right reflection act
/// as f^dagger and f. The induced channel is unital for every unitary s2,
/// every unitary f_rr, and every reservoir state.
ScenarioResult one_d_scatterer(const CMatrix& s2, const CMatrix& f_rr);

/// Block underlying one_d_scatterer, exposed for direct probing.
EnergyBlock one_d_scatterer_block(const CMatrix& s2, const CMatrix& f_rr,
                                  double weight = 1.0);

/// Block underlying three_lead_demon (the in-shell part).
EnergyBlock three_lead_block(const ThreeLeadConfig& cfg, double weight = 1.0);

/// Per-spin averages (alpha, beta) = (<u_b^dagger u_a>, <u_a u_b^dagger>)
/// in the factor's state. The two share a real part but not a magnitude;
/// q = max(|alpha|, |beta|) < 1 sets the asymptotic decay rate of the
/// commutator average.
std::pair<Complex, Complex> spin_overlaps(const SpinFactor& factor);

/// |<[F_b^dagger, F_a]>| for F built as n-fold tensor products of per-spin
/// rotations, n = 1..n_spins. The average factorizes, so the value is
/// |prod alpha_k - prod beta_k|. Commuting-z mode gives exactly zero.
std::vector<std::pair<int, double>> nspin_commutator_decay(
    const NSpinConfig& cfg);

/// Step unitary of the scatterer walk: each basis scatterer configuration
/// acts as a permutation of the electron (site, direction) states, flipping
/// direction at closed sites and then hopping one site along the current
/// direction on a ring.
CMatrix tls_step_unitary(int n_sites);

/// Product state of one scatterer per site, each diag(p_open, 1 - p_open).
DensityMatrix tls_reservoir_state(int n_sites, double open_prob);

/// Electron entropy trajectory. Fresh-every-step traces the scatterers out
/// after each step and couples new ones, giving a channel per step; reuse
/// keeps the same scatterers entangled across steps (capped at 3 sites and
/// 6 steps), where no single-step channel description applies and the
/// bound column carries the -inf sentinel.
ScenarioResult tls_random_walk(const TlsWalkConfig& cfg);

/// Reservoir operators diagonal in a classical position register:
/// F(j, i) = diag_r s_r(j, i) for per-position unitaries s_r. Diagonal
/// operators commute, so the criterion defect vanishes identically.
ScenarioResult diagonal_reservoir_channel(
    const std::vector<std::pair<std::string, double>>& positions_weights,
    const std::map<std::string, CMatrix>& s_of_position);

}  // namespace unital
