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

#include "unital/config_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace unital {

namespace {

const Complex kI(0.0, 1.0);

const json_t& require_field(const json_t& j, const std::string& key) {
  if (!j.is_object()) {
    throw ConfigError("config: expected an object holding field '" + key + "'");
  }
  if (!j.contains(key)) {
    throw ConfigError("config: missing field '" + key + "'");
  }
  return j.at(key);
}

double require_number(const json_t& j, const std::string& key) {
  const json_t& v = require_field(j, key);
  if (!v.is_number()) {
    throw ConfigError("config: field '" + key + "' must be a number");
  }
  return v.get<double>();
}

int require_int(const json_t& j, const std::string& key) {
  const json_t& v = require_field(j, key);
  if (!v.is_number_integer()) {
    throw ConfigError("config: field '" + key + "' must be an integer");
  }
  return v.get<int>();
}

std::string require_string(const json_t& j, const std::string& key) {
  const json_t& v = require_field(j, key);
  if (!v.is_string()) {
    throw ConfigError("config: field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

Eigen::Vector3d parse_bloch(const json_t& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) {
    throw ConfigError("config: field '" + where +
                      "' must be a three-component Bloch vector");
  }
  Eigen::Vector3d b;
  for (int k = 0; k < 3; ++k) {
    if (!v.at(static_cast<std::size_t>(k)).is_number()) {
      throw ConfigError("config: field '" + where + "' must hold numbers");
    }
    b[k] = v.at(static_cast<std::size_t>(k)).get<double>();
  }
  return b;
}

// A spin rotation is a named constant, an axis/angle pair, or a raw matrix.
CMatrix parse_rotation(const json_t& v, const std::string& where) {
  if (v.is_string()) {
    const std::string name = v.get<std::string>();
    CMatrix m(2, 2);
    if (name == "identity") {
      m << 1, 0, 0, 1;
    } else if (name == "i_sigma_x") {
      m << 0, kI, kI, 0;
    } else if (name == "i_sigma_y") {
      m << 0, 1, -1, 0;
    } else if (name == "i_sigma_z") {
      m << kI, 0, 0, -kI;
    } else {
      throw ConfigError("config: field '" + where + "' names unknown rotation '" +
                        name + "'");
    }
    return m;
  }
  if (v.is_object()) {
    const Eigen::Vector3d axis = parse_bloch(require_field(v, "axis"),
                                             where + ".axis");
    const double angle = require_number(v, "angle");
    const double norm = axis.norm();
    if (!(norm > 0.0)) {
      throw ConfigError("config: field '" + where + ".axis' must be nonzero");
    }
    const Eigen::Vector3d n = axis / norm;
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    CMatrix m(2, 2);
    m(0, 0) = Complex(c, -s * n[2]);
    m(0, 1) = Complex(-s * n[1], -s * n[0]);
    m(1, 0) = Complex(s * n[1], -s * n[0]);
    m(1, 1) = Complex(c, s * n[2]);
    return m;
  }
  const CMatrix m = parse_complex_matrix(v, where);
  if (m.rows() != 2 || m.cols() != 2) {
    throw ConfigError("config: field '" + where + "' must be a 2 x 2 matrix");
  }
  return m;
}

DensityMatrix parse_density(const json_t& v, const std::string& where) {
  const CMatrix m = parse_complex_matrix(v, where);
  try {
    return DensityMatrix(m);
  } catch (const Error& e) {
    throw ConfigError("config: field '" + where +
                      "' is not a density matrix: " + e.what());
  }
}

}  // namespace

json_t load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("config: cannot read file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json_t::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: malformed JSON in '" + path + "': " + e.what());
  }
}

Complex parse_complex(const json_t& v, const std::string& where) {
  if (v.is_number()) {
    return Complex(v.get<double>(), 0.0);
  }
  if (v.is_array() && v.size() == 2 && v.at(0).is_number() &&
      v.at(1).is_number()) {
    return Complex(v.at(0).get<double>(), v.at(1).get<double>());
  }
  throw ConfigError("config: field '" + where +
                    "' must be a number or an [re, im] pair");
}

CMatrix parse_complex_matrix(const json_t& v, const std::string& where) {
  if (!v.is_array() || v.empty()) {
    throw ConfigError("config: field '" + where +
                      "' must be an array of matrix rows");
  }
  const Index rows = static_cast<Index>(v.size());
  const json_t& first = v.at(0);
  if (!first.is_array() || first.empty()) {
    throw ConfigError("config: field '" + where +
                      "' must be an array of matrix rows");
  }
  const Index cols = static_cast<Index>(first.size());
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json_t& row = v.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ConfigError("config: field '" + where + "' has a ragged row");
    }
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = parse_complex(row.at(static_cast<std::size_t>(c)),
                              where + "[" + std::to_string(r) + "][" +
                                  std::to_string(c) + "]");
    }
  }
  return m;
}

ThreeLeadConfig parse_three_lead_config(const json_t& j) {
  ThreeLeadConfig cfg = default_three_lead_config();
  if (j.contains("s_offdiag")) {
    cfg.s_offdiag = parse_complex(j.at("s_offdiag"), "s_offdiag");
  }
  if (j.contains("rotations")) {
    const json_t& rots = j.at("rotations");
    if (!rots.is_array() || rots.size() != 3) {
      throw ConfigError("config: field 'rotations' must list three rotations");
    }
    for (std::size_t k = 0; k < 3; ++k) {
      cfg.rotations[k] = parse_rotation(
          rots.at(k), "rotations[" + std::to_string(k) + "]");
    }
  }
  if (j.contains("spin_bloch")) {
    cfg.spin.bloch = parse_bloch(j.at("spin_bloch"), "spin_bloch");
  }
  return cfg;
}

OneDConfig parse_one_d_config(const json_t& j) {
  OneDConfig cfg;
  cfg.s2 = parse_complex_matrix(require_field(j, "s2"), "s2");
  if (cfg.s2.rows() != 2 || cfg.s2.cols() != 2) {
    throw ConfigError("config: field 's2' must be a 2 x 2 matrix");
  }
  cfg.f_rr = parse_complex_matrix(require_field(j, "f_rr"), "f_rr");
  if (cfg.f_rr.rows() != cfg.f_rr.cols()) {
    throw ConfigError("config: field 'f_rr' must be square");
  }
  return cfg;
}

NSpinConfig parse_nspin_config(const json_t& j) {
  NSpinConfig cfg;
  cfg.n_spins = require_int(j, "n_spins");
  if (j.contains("mode")) {
    const std::string mode = require_string(j, "mode");
    if (mode == "generic") {
      cfg.mode = NSpinMode::generic;
    } else if (mode == "commuting_z") {
      cfg.mode = NSpinMode::commuting_z;
    } else {
      throw ConfigError("config: field 'mode' must be generic or commuting_z");
    }
  }
  const json_t& spins = require_field(j, "spins");
  if (!spins.is_array() || spins.empty()) {
    throw ConfigError("config: field 'spins' must be a nonempty array");
  }
  for (std::size_t k = 0; k < spins.size(); ++k) {
    const json_t& entry = spins.at(k);
    const std::string where = "spins[" + std::to_string(k) + "]";
    SpinFactor factor;
    factor.u_a = parse_rotation(require_field(entry, "u_a"), where + ".u_a");
    factor.u_b = parse_rotation(require_field(entry, "u_b"), where + ".u_b");
    factor.state.bloch =
        parse_bloch(require_field(entry, "bloch"), where + ".bloch");
    cfg.spins.push_back(std::move(factor));
  }
  return cfg;
}

TlsWalkConfig parse_tls_config(const json_t& j) {
  TlsWalkConfig cfg;
  if (j.contains("n_sites")) cfg.n_sites = require_int(j, "n_sites");
  if (j.contains("n_steps")) cfg.n_steps = require_int(j, "n_steps");
  if (j.contains("tls_open_prob")) {
    cfg.tls_open_prob = require_number(j, "tls_open_prob");
  }
  if (j.contains("refresh_policy")) {
    const std::string policy = require_string(j, "refresh_policy");
    if (policy == "fresh") {
      cfg.refresh_policy = RefreshPolicy::fresh_every_step;
    } else if (policy == "reuse") {
      cfg.refresh_policy = RefreshPolicy::reuse;
    } else {
      throw ConfigError(
          "config: field 'refresh_policy' must be fresh or reuse");
    }
  }
  if (j.contains("seed")) {
    const json_t& v = j.at("seed");
    if (!v.is_number_integer()) {
      throw ConfigError("config: field 'seed' must be an integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  }
  if (j.contains("initial_basis_state")) {
    cfg.initial_basis_state = require_int(j, "initial_basis_state");
  }
  return cfg;
}

DiagonalConfig parse_diagonal_config(const json_t& j) {
  const json_t& positions = require_field(j, "positions");
  if (!positions.is_array() || positions.empty()) {
    throw ConfigError("config: field 'positions' must be a nonempty array");
  }
  DiagonalConfig cfg;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const json_t& entry = positions.at(k);
    const std::string where = "positions[" + std::to_string(k) + "]";
    const std::string label = require_string(entry, "label");
    if (cfg.s_of_position.count(label) != 0) {
      throw ConfigError("config: field '" + where + "' repeats label '" +
                        label + "'");
    }
    const double weight = require_number(entry, "weight");
    cfg.positions_weights.emplace_back(label, weight);
    cfg.s_of_position[label] =
        parse_complex_matrix(require_field(entry, "s"), where + ".s");
  }
  return cfg;
}

ChannelSpec parse_channel_spec(const json_t& j) {
  const int dim_sys = require_int(j, "dim_sys");
  const int dim_res = require_int(j, "dim_res");
  if (dim_sys < 1 || dim_res < 1) {
    throw ConfigError("config: fields 'dim_sys' and 'dim_res' must be positive");
  }
  const json_t& blocks_j = require_field(j, "blocks");
  if (!blocks_j.is_array() || blocks_j.empty()) {
    throw ConfigError("config: field 'blocks' must be a nonempty array");
  }
  std::vector<EnergyBlock> blocks;
  for (std::size_t k = 0; k < blocks_j.size(); ++k) {
    const json_t& entry = blocks_j.at(k);
    const std::string where = "blocks[" + std::to_string(k) + "]";
    EnergyBlock block;
    block.energy_label = require_string(entry, "label");
    block.dim_sys = dim_sys;
    block.weight = require_number(entry, "weight");
    block.s_matrix =
        parse_complex_matrix(require_field(entry, "s"), where + ".s");
    if (block.s_matrix.rows() != dim_sys || block.s_matrix.cols() != dim_sys) {
      throw ConfigError("config: field '" + where + ".s' must be " +
                        std::to_string(dim_sys) + " x " +
                        std::to_string(dim_sys));
    }
    const json_t& fam = require_field(entry, "F");
    if (!fam.is_object()) {
      throw ConfigError("config: field '" + where +
                        ".F' must map \"j,i\" keys to matrices");
    }
    for (const auto& [key, value] : fam.items()) {
      int fj = -1;
      int fi = -1;
      char extra = '\0';
      if (std::sscanf(key.c_str(), "%d,%d%c", &fj, &fi, &extra) != 2 ||
          fj < 0 || fj >= dim_sys || fi < 0 || fi >= dim_sys) {
        throw ConfigError("config: field '" + where + ".F' has bad key '" +
                          key + "', expected \"j,i\" within the system range");
      }
      CMatrix f =
          parse_complex_matrix(value, where + ".F[\"" + key + "\"]");
      if (f.rows() != dim_res || f.cols() != dim_res) {
        throw ConfigError("config: field '" + where + ".F[\"" + key +
                          "\"]' must be " + std::to_string(dim_res) + " x " +
                          std::to_string(dim_res));
      }
      block.f_family[{fj, fi}] = std::move(f);
    }
    if (block.f_family.empty()) {
      throw ConfigError("config: field '" + where +
                        ".F' must hold at least one operator");
    }
    blocks.push_back(std::move(block));
  }
  DensityMatrix pi =
      parse_density(require_field(j, "reservoir_state"), "reservoir_state");
  if (pi.dim() != dim_res) {
    throw ConfigError(
        "config: field 'reservoir_state' does not match dim_res");
  }
  std::optional<std::vector<DensityMatrix>> rho_blocks;
  if (j.contains("rho_blocks")) {
    const json_t& rho_j = j.at("rho_blocks");
    if (!rho_j.is_array() || rho_j.size() != blocks.size()) {
      throw ConfigError(
          "config: field 'rho_blocks' must list one state per block");
    }
    std::vector<DensityMatrix> states;
    for (std::size_t k = 0; k < rho_j.size(); ++k) {
      states.push_back(parse_density(
          rho_j.at(k), "rho_blocks[" + std::to_string(k) + "]"));
      if (states.back().dim() != dim_sys) {
        throw ConfigError("config: field 'rho_blocks[" + std::to_string(k) +
                          "]' does not match dim_sys");
      }
    }
    rho_blocks = std::move(states);
  }
  return ChannelSpec{dim_sys, dim_res, std::move(blocks), std::move(pi),
                     std::move(rho_blocks)};
}

bool expect_unital_flag(const json_t& j) {
  if (!j.is_object() || !j.contains("expect_unital")) return false;
  const json_t& v = j.at("expect_unital");
  if (!v.is_boolean()) {
    throw ConfigError("config: field 'expect_unital' must be a boolean");
  }
  return v.get<bool>();
}

}  // namespace unital
