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

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unital/scenarios.hpp"

namespace unital {

// Insertion-ordered so config echoes and report round-trips are stable.
using json_t = nlohmann::ordered_json;

/// Parse a JSON file; throws ConfigError naming the file on any failure.
json_t load_json_file(const std::string& path);

/// Complex numbers are [re, im] pairs (bare numbers read as real).
Complex parse_complex(const json_t& v, const std::string& where);

/// A matrix is an array of rows, each row an array of [re, im] entries.
CMatrix parse_complex_matrix(const json_t& v, const std::string& where);

ThreeLeadConfig parse_three_lead_config(const json_t& j);

struct OneDConfig {
  CMatrix s2;
  CMatrix f_rr;
};
OneDConfig parse_one_d_config(const json_t& j);

NSpinConfig parse_nspin_config(const json_t& j);
TlsWalkConfig parse_tls_config(const json_t& j);

struct DiagonalConfig {
  std::vector<std::pair<std::string, double>> positions_weights;
  std::map<std::string, CMatrix> s_of_position;
};
DiagonalConfig parse_diagonal_config(const json_t& j);

/// External channel spec: {"dim_sys", "dim_res", "blocks": [{"label",
/// "weight", "s", "F": {"j,i": matrix}}], "reservoir_state", optional
/// "rho_blocks"}.
struct ChannelSpec {
  Index dim_sys = 0;
  Index dim_res = 0;
  std::vector<EnergyBlock> blocks;
  DensityMatrix reservoir_state;
  std::optional<std::vector<DensityMatrix>> rho_blocks;
};
ChannelSpec parse_channel_spec(const json_t& j);

/// Scenario configs may opt into a hard unitality gate; a defect beyond
/// 1e-10 then fails the run with exit status 2.
bool expect_unital_flag(const json_t& j);

}  // namespace unital
