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

#include "unital/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "unital/random.hpp"

namespace unital {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

const Complex kI(0.0, 1.0);

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(const Complex& z) {
  return fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i";
}

void require_unitary(const CMatrix& u, Index dim, const char* what) {
  if (u.rows() != dim || u.cols() != dim) {
    throw DimensionMismatch(std::string(what) + ": expected a " +
                            std::to_string(dim) + " x " + std::to_string(dim) +
                            " matrix");
  }
  const double defect = unitarity_defect(u);
  if (defect > kConstraintTol) {
    throw NotUnitary(std::string(what) + ": unitarity defect " +
                     std::to_string(defect));
  }
}

// Walk block: every basis scatterer configuration tau permutes the electron
// states, so every F(j, i) is a diagonal 0/1 indicator and the whole family
// commutes.
EnergyBlock tls_walk_block(int n_sites) {
  const Index de = 2 * static_cast<Index>(n_sites);
  const Index dr = Index(1) << n_sites;
  EnergyBlock block;
  block.energy_label = "walk";
  block.dim_sys = de;
  block.weight = 1.0;
  block.s_matrix = CMatrix::Ones(de, de);
  std::map<std::pair<Index, Index>, CMatrix> fam;
  for (Index j = 0; j < de; ++j) {
    for (Index i = 0; i < de; ++i) fam[{j, i}] = CMatrix::Zero(dr, dr);
  }
  const CMatrix u = tls_step_unitary(n_sites);
  for (Index i = 0; i < de; ++i) {
    for (Index tau = 0; tau < dr; ++tau) {
      for (Index j = 0; j < de; ++j) {
        if (std::abs(u(j * dr + tau, i * dr + tau)) > 0.5) {
          fam[{j, i}](tau, tau) = Complex(1.0, 0.0);
        }
      }
    }
  }
  block.f_family = std::move(fam);
  return block;
}

}  // namespace

DensityMatrix SpinState::to_density_matrix() const {
  const double norm = bloch.norm();
  if (norm > 1.0 + kPositivityTol) {
    throw InvalidState("SpinState: Bloch vector length " + std::to_string(norm) +
                       " exceeds one");
  }
  CMatrix m = 0.5 * (CMatrix::Identity(2, 2) + bloch[0] * pauli_x() +
                     bloch[1] * pauli_y() + bloch[2] * pauli_z());
  return DensityMatrix(std::move(m));
}

ThreeLeadConfig default_three_lead_config() {
  ThreeLeadConfig cfg;
  cfg.s_offdiag = Complex(2.0 / 3.0, 0.0);
  cfg.rotations[0] = CMatrix::Identity(2, 2);
  cfg.rotations[1] = kI * pauli_x();
  cfg.rotations[2] = kI * pauli_y();
  cfg.spin.bloch = Eigen::Vector3d(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
  return cfg;
}

CMatrix symmetric_three_lead_smatrix(double t12, double t13, double t23) {
  for (double v : {t12, t13, t23}) {
    if (!(v > 0.0) || v > 1.0) {
      throw NotCompletable(
          "symmetric_three_lead_smatrix: transmissions must lie in (0, 1]");
    }
  }
  const double s12 = std::sqrt(t12);
  const double s13 = std::sqrt(t13);
  const double s23 = std::sqrt(t23);
  // Real parts of the diagonal fixed by off-diagonal column orthogonality.
  const double r[3] = {
      0.5 * s23 * s12 * s13 * (1.0 / t23 - 1.0 / t12 - 1.0 / t13),
      0.5 * s13 * s12 * s23 * (1.0 / t13 - 1.0 / t12 - 1.0 / t23),
      0.5 * s12 * s13 * s23 * (1.0 / t12 - 1.0 / t13 - 1.0 / t23),
  };
  // One shared imaginary offset closes the row norms; the same eta works for
  // every row, which is an algebraic identity of the r_i above.
  double eta_sq = 1.0 - t12 - t13 - r[0] * r[0];
  if (eta_sq < 1e-12) {
    if (eta_sq < -kHermitianTol) {
      throw NotCompletable(
          "symmetric_three_lead_smatrix: no unitary completion, eta^2 = " +
          std::to_string(eta_sq));
    }
    eta_sq = 0.0;
  }
  const double eta = std::sqrt(eta_sq);
  CMatrix s(3, 3);
  s << Complex(r[0], eta), Complex(s12, 0), Complex(s13, 0), Complex(s12, 0),
      Complex(r[1], eta), Complex(s23, 0), Complex(s13, 0), Complex(s23, 0),
      Complex(r[2], eta);
  const double defect = unitarity_defect(s);
  if (defect > kEntropyTol) {
    throw NotCompletable(
        "symmetric_three_lead_smatrix: completion misses unitarity by " +
        std::to_string(defect));
  }
  return s;
}

EnergyBlock three_lead_block(const ThreeLeadConfig& cfg, double weight) {
  const double mag = std::abs(cfg.s_offdiag);
  if (!(mag > 0.0)) {
    throw NotCompletable("three_lead_block: off-diagonal amplitude is zero");
  }
  const Complex phase = cfg.s_offdiag / mag;
  for (const auto& rot : cfg.rotations) {
    require_unitary(rot, 2, "three_lead_block rotation");
  }
  EnergyBlock block;
  block.energy_label = "shell-0";
  block.dim_sys = 3;
  block.weight = weight;
  block.s_matrix = phase * symmetric_three_lead_smatrix(mag * mag, mag * mag,
                                                        mag * mag);
  for (Index b = 0; b < 3; ++b) {
    for (Index a = 0; a < 3; ++a) {
      block.f_family[{b, a}] = cfg.rotations[static_cast<std::size_t>(b)] *
                               cfg.rotations[static_cast<std::size_t>(a)]
                                   .adjoint();
    }
  }
  return block;
}

ScenarioResult three_lead_demon(const ThreeLeadConfig& cfg) {
  const DensityMatrix pi = cfg.spin.to_density_matrix();
  EnergyBlock active = three_lead_block(cfg, 0.5);

  // Pass-through partner shell: the junction is transparent off resonance.
  EnergyBlock idle;
  idle.energy_label = "shell-1";
  idle.dim_sys = 3;
  idle.weight = 0.5;
  idle.s_matrix = CMatrix::Identity(3, 3);
  for (Index j = 0; j < 3; ++j) idle.f_family[{j, j}] = CMatrix::Identity(2, 2);

  const CriterionDefect criterion = unitality_criterion_defect(active, pi);
  const CMatrix u = assemble_grand_unitary(active);
  const KrausChannel phi = channel_from_stinespring(u, pi, 3);
  const UnitalityDefect direct = unitality_defect(phi);
  if (!approx_equal(direct.matrix, criterion.matrix, kConstraintTol)) {
    throw Error(
        "three_lead_demon: commutator criterion disagrees with the dilation "
        "channel");
  }

  std::vector<EnergyBlock> blocks{active, idle};
  std::vector<DensityMatrix> rho_blocks{DensityMatrix::maximally_mixed(3),
                                        DensityMatrix::maximally_mixed(3)};

  ScenarioResult result;
  result.unitality_max_defect = direct.max_abs;
  result.criterion = criterion;
  result.entropy.push_back(blockwise_entropy_report(blocks, rho_blocks, pi));
  result.metadata = {
      {"scenario", "three-lead"},
      {"s_offdiag", fmt(cfg.s_offdiag)},
      {"spin_bloch", "(" + fmt(cfg.spin.bloch[0]) + ", " +
                         fmt(cfg.spin.bloch[1]) + ", " +
                         fmt(cfg.spin.bloch[2]) + ")"},
      {"blocks", "shell-0:0.5, shell-1:0.5"},
      {"kraus_rank", std::to_string(phi.kraus_ops.size())},
  };
  return result;
}

EnergyBlock one_d_scatterer_block(const CMatrix& s2, const CMatrix& f_rr,
                                  double weight) {
  require_unitary(s2, 2, "one_d_scatterer s-matrix");
  if (f_rr.rows() != f_rr.cols() || f_rr.rows() < 1) {
    throw DimensionMismatch("one_d_scatterer: f_rr must be square");
  }
  const double fdef = unitarity_defect(f_rr);
  if (fdef > kConstraintTol) {
    throw NotUnitary("one_d_scatterer: f_rr unitarity defect " +
                     std::to_string(fdef));
  }
  const Index dr = f_rr.rows();
  EnergyBlock block;
  block.energy_label = "line";
  block.dim_sys = 2;
  block.weight = weight;
  block.s_matrix = s2;
  // Transmission is too fast to disturb the slow mode; only reflection
  // kicks it, forward on the right and backward on the left.
  block.f_family[{0, 0}] = f_rr.adjoint();
  block.f_family[{1, 1}] = f_rr;
  block.f_family[{0, 1}] = CMatrix::Identity(dr, dr);
  block.f_family[{1, 0}] = CMatrix::Identity(dr, dr);
  return block;
}

ScenarioResult one_d_scatterer(const CMatrix& s2, const CMatrix& f_rr) {
  const EnergyBlock block = one_d_scatterer_block(s2, f_rr);
  const Index dr = f_rr.rows();
  const CMatrix u = assemble_grand_unitary(block);

  // The block is unital for every reservoir state, so probe a spread of
  // them: maximally mixed, a pure corner, and a fixed pseudo-random batch.
  std::vector<DensityMatrix> probes;
  probes.push_back(DensityMatrix::maximally_mixed(dr));
  CVector corner = CVector::Zero(dr);
  corner[0] = Complex(1.0, 0.0);
  probes.push_back(DensityMatrix::pure(corner));
  Rng rng(0x5ca77e12ULL);
  for (int k = 0; k < 6; ++k) probes.push_back(rng.density(dr));

  ScenarioResult result;
  double worst_dilation = 0.0;
  double worst_criterion = -1.0;
  for (const auto& pi : probes) {
    const CriterionDefect crit = unitality_criterion_defect(block, pi);
    const KrausChannel phi = channel_from_stinespring(u, pi, 2);
    const UnitalityDefect direct = unitality_defect(phi);
    worst_dilation = std::max(worst_dilation, direct.max_abs);
    if (crit.max_abs > worst_criterion) {
      worst_criterion = crit.max_abs;
      result.criterion = crit;
    }
  }
  if (std::max(worst_dilation, worst_criterion) > kPositivityTol) {
    throw ConstraintViolation(
        "one_d_scatterer: expected a unital channel for every reservoir "
        "state, defect " +
        std::to_string(std::max(worst_dilation, worst_criterion)));
  }
  result.unitality_max_defect = worst_dilation;

  // Entropy balance for a left-moving pure electron against the maximally
  // mixed slow mode.
  const KrausChannel phi = channel_from_stinespring(
      u, DensityMatrix::maximally_mixed(dr), 2);
  CVector left = CVector::Zero(2);
  left[0] = Complex(1.0, 0.0);
  result.entropy.push_back(entropy_gain(phi, DensityMatrix::pure(left)));
  result.metadata = {
      {"scenario", "one-d"},
      {"dim_res", std::to_string(dr)},
      {"reservoir_probes", std::to_string(probes.size())},
  };
  return result;
}

std::pair<Complex, Complex> spin_overlaps(const SpinFactor& factor) {
  require_unitary(factor.u_a, 2, "spin_overlaps u_a");
  require_unitary(factor.u_b, 2, "spin_overlaps u_b");
  const CMatrix pi = factor.state.to_density_matrix().matrix();
  const Complex alpha = (pi * (factor.u_b.adjoint() * factor.u_a)).trace();
  const Complex beta = (pi * (factor.u_a * factor.u_b.adjoint())).trace();
  return {alpha, beta};
}

std::vector<std::pair<int, double>> nspin_commutator_decay(
    const NSpinConfig& cfg) {
  if (cfg.n_spins < 1) {
    throw ConfigError("nspin: n_spins must be at least one");
  }
  if (cfg.spins.size() != 1 &&
      cfg.spins.size() != static_cast<std::size_t>(cfg.n_spins)) {
    throw ConfigError("nspin: provide one spin factor or one per spin");
  }
  for (const auto& factor : cfg.spins) {
    require_unitary(factor.u_a, 2, "nspin u_a");
    require_unitary(factor.u_b, 2, "nspin u_b");
    if (cfg.mode == NSpinMode::commuting_z) {
      const double offdiag =
          std::max({std::abs(factor.u_a(0, 1)), std::abs(factor.u_a(1, 0)),
                    std::abs(factor.u_b(0, 1)), std::abs(factor.u_b(1, 0))});
      if (offdiag > 0.0) {
        throw ConfigError(
            "nspin: commuting_z mode requires diagonal rotations");
      }
    }
  }

  std::vector<std::pair<int, double>> decay;
  decay.reserve(static_cast<std::size_t>(cfg.n_spins));
  Complex prod_alpha(1.0, 0.0);
  Complex prod_beta(1.0, 0.0);
  for (int n = 1; n <= cfg.n_spins; ++n) {
    const std::size_t k =
        cfg.spins.size() == 1 ? 0 : static_cast<std::size_t>(n - 1);
    const auto [alpha, beta] = spin_overlaps(cfg.spins[k]);
    prod_alpha *= alpha;
    prod_beta *= beta;
    decay.emplace_back(n, std::abs(prod_alpha - prod_beta));
  }
  return decay;
}

CMatrix tls_step_unitary(int n_sites) {
  if (n_sites < 2 || n_sites > 16) {
    throw ConfigError("tls walk: n_sites must lie in [2, 16]");
  }
  const Index l = n_sites;
  const Index de = 2 * l;
  const Index dr = Index(1) << n_sites;
  CMatrix u = CMatrix::Zero(de * dr, de * dr);
  for (Index tau = 0; tau < dr; ++tau) {
    for (Index x = 0; x < l; ++x) {
      for (Index d = 0; d < 2; ++d) {
        const Index closed = (tau >> x) & 1;
        const Index d_new = d ^ closed;
        const Index x_new = (d_new == 0) ? (x + 1) % l : (x + l - 1) % l;
        u((x_new * 2 + d_new) * dr + tau, (x * 2 + d) * dr + tau) =
            Complex(1.0, 0.0);
      }
    }
  }
  return u;
}

DensityMatrix tls_reservoir_state(int n_sites, double open_prob) {
  if (!(open_prob >= 0.0 && open_prob <= 1.0)) {
    throw ConfigError("tls walk: tls_open_prob must lie in [0, 1]");
  }
  const Index dr = Index(1) << n_sites;
  CMatrix pi = CMatrix::Zero(dr, dr);
  for (Index tau = 0; tau < dr; ++tau) {
    double w = 1.0;
    for (int x = 0; x < n_sites; ++x) {
      w *= ((tau >> x) & 1) ? (1.0 - open_prob) : open_prob;
    }
    pi(tau, tau) = Complex(w, 0.0);
  }
  return DensityMatrix(std::move(pi));
}

ScenarioResult tls_random_walk(const TlsWalkConfig& cfg) {
  if (cfg.n_steps < 1) {
    throw ConfigError("tls walk: n_steps must be at least one");
  }
  if (cfg.refresh_policy == RefreshPolicy::fresh_every_step) {
    if (cfg.n_sites < 2 || cfg.n_sites > 6) {
      throw ConfigError("tls walk: fresh policy supports 2 to 6 sites");
    }
  } else {
    if (cfg.n_sites < 2 || cfg.n_sites > 3 || cfg.n_steps > 6) {
      throw ConfigError(
          "tls walk: reuse policy is capped at 3 sites and 6 steps");
    }
  }
  const Index de = 2 * static_cast<Index>(cfg.n_sites);
  const Index dr = Index(1) << cfg.n_sites;

  DensityMatrix rho = DensityMatrix::maximally_mixed(de);
  if (cfg.initial_basis_state.has_value()) {
    const int idx = *cfg.initial_basis_state;
    if (idx < 0 || idx >= de) {
      throw ConfigError("tls walk: initial_basis_state out of range");
    }
    CVector e = CVector::Zero(de);
    e[idx] = Complex(1.0, 0.0);
    rho = DensityMatrix::pure(e);
  } else {
    Rng rng(cfg.seed);
    rho = rng.pure_density(de);
  }

  const DensityMatrix pi = tls_reservoir_state(cfg.n_sites, cfg.tls_open_prob);
  const CMatrix u = tls_step_unitary(cfg.n_sites);
  const EnergyBlock block = tls_walk_block(cfg.n_sites);
  const KrausChannel phi = channel_from_stinespring(u, pi, de);

  ScenarioResult result;
  result.criterion = unitality_criterion_defect(block, pi);
  result.unitality_max_defect = unitality_defect(phi).max_abs;

  if (cfg.refresh_policy == RefreshPolicy::fresh_every_step) {
    for (int step = 0; step < cfg.n_steps; ++step) {
      result.entropy.push_back(entropy_gain(phi, rho));
      rho = apply_channel(phi, rho);
    }
  } else {
    // The scatterers are never traced out between steps, so after the first
    // step there is no channel on the electron alone and no finite bound.
    CMatrix chi = tensor_product(rho.matrix(), pi.matrix());
    double s_prev = von_neumann_entropy(rho);
    for (int step = 0; step < cfg.n_steps; ++step) {
      chi = (u * chi * u.adjoint()).eval();
      const CMatrix reduced =
          partial_trace(chi, de, dr, Subsystem::reservoir);
      const auto eig = hermitian_eigendecompose(reduced);
      const double s_now = entropy_of_spectrum(eig.eigenvalues);
      EntropyReport rep;
      rep.s_in = s_prev;
      rep.s_out = s_now;
      rep.delta_s = s_now - s_prev;
      rep.eq1_bound = kNegInf;
      result.entropy.push_back(rep);
      s_prev = s_now;
    }
  }

  result.metadata = {
      {"scenario", "tls-walk"},
      {"n_sites", std::to_string(cfg.n_sites)},
      {"n_steps", std::to_string(cfg.n_steps)},
      {"tls_open_prob", fmt(cfg.tls_open_prob)},
      {"refresh_policy",
       cfg.refresh_policy == RefreshPolicy::fresh_every_step ? "fresh" : "reuse"},
      {"initial_state", cfg.initial_basis_state.has_value()
                            ? "basis:" + std::to_string(*cfg.initial_basis_state)
                            : "seeded:" + std::to_string(cfg.seed)},
  };
  return result;
}

ScenarioResult diagonal_reservoir_channel(
    const std::vector<std::pair<std::string, double>>& positions_weights,
    const std::map<std::string, CMatrix>& s_of_position) {
  if (positions_weights.empty()) {
    throw ConfigError("diagonal: at least one position is required");
  }
  double wsum = 0.0;
  for (const auto& [label, w] : positions_weights) {
    if (!(w >= 0.0)) {
      throw ConfigError("diagonal: weight of position '" + label +
                        "' must be nonnegative");
    }
    if (s_of_position.find(label) == s_of_position.end()) {
      throw ConfigError("diagonal: no s-matrix for position '" + label + "'");
    }
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > kHermitianTol) {
    throw ConfigError("diagonal: position weights sum to " + fmt(wsum) +
                      ", expected one");
  }
  const Index ds = s_of_position.begin()->second.rows();
  for (const auto& [label, s] : s_of_position) {
    require_unitary(s, ds, ("diagonal s-matrix at '" + label + "'").c_str());
  }

  const Index dr = static_cast<Index>(positions_weights.size());
  EnergyBlock block;
  block.energy_label = "pinned";
  block.dim_sys = ds;
  block.weight = 1.0;
  block.s_matrix = CMatrix::Ones(ds, ds);
  for (Index j = 0; j < ds; ++j) {
    for (Index i = 0; i < ds; ++i) {
      CMatrix f = CMatrix::Zero(dr, dr);
      for (Index r = 0; r < dr; ++r) {
        f(r, r) = s_of_position.at(positions_weights[r].first)(j, i);
      }
      block.f_family[{j, i}] = f;
    }
  }

  CMatrix pi_m = CMatrix::Zero(dr, dr);
  for (Index r = 0; r < dr; ++r) {
    pi_m(r, r) = Complex(positions_weights[r].second, 0.0);
  }
  const DensityMatrix pi(std::move(pi_m));

  ScenarioResult result;
  result.criterion = unitality_criterion_defect(block, pi);
  const KrausChannel phi =
      channel_from_stinespring(assemble_grand_unitary(block), pi, ds);
  result.unitality_max_defect = unitality_defect(phi).max_abs;

  CVector e0 = CVector::Zero(ds);
  e0[0] = Complex(1.0, 0.0);
  result.entropy.push_back(entropy_gain(phi, DensityMatrix::pure(e0)));
  std::string positions;
  for (const auto& [label, w] : positions_weights) {
    if (!positions.empty()) positions += ", ";
    positions += label + ":" + fmt(w);
  }
  result.metadata = {
      {"scenario", "diagonal"},
      {"dim_sys", std::to_string(ds)},
      {"positions", positions},
  };
  return result;
}

}  // namespace unital
