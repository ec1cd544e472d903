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

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "unital/config_io.hpp"
#include "unital/random.hpp"
#include "unital/report_io.hpp"

namespace fs = std::filesystem;
using unital::json_t;

namespace {

struct PointOutcome {
  unital::ReportDocument doc;
  bool expect_unital = false;
  bool gate_failed = false;
};

std::string fmt(double v) { return unital::format_csv_number(v); }

std::string file_stem(const std::string& scenario) {
  std::string stem = scenario;
  for (char& c : stem) {
    if (c == '-') c = '_';
  }
  return stem;
}

fs::path resolve_output_dir(const std::string& cli_output) {
  if (!cli_output.empty()) return fs::path(cli_output);
  if (const char* env = std::getenv("UNITAL_LAB_OUTPUT")) {
    if (env[0] != '\0') return fs::path(env);
  }
  return fs::path(".");
}

void fill_from_result(unital::ReportDocument& doc,
                      const unital::ScenarioResult& result) {
  doc.unitality_max_defect = result.unitality_max_defect;
  doc.criterion = result.criterion;
  doc.trajectory = result.entropy;
  doc.metadata = result.metadata;
}

PointOutcome run_point(const std::string& name, const json_t& point,
                       std::optional<std::uint64_t> seed_override, int max_n) {
  if (!point.is_object()) {
    throw unital::ConfigError("config: each run must be a JSON object");
  }
  if (point.contains("scenario")) {
    const json_t& v = point.at("scenario");
    if (!v.is_string() || v.get<std::string>() != name) {
      throw unital::ConfigError("config: field 'scenario' does not match '" +
                                name + "'");
    }
  }

  PointOutcome outcome;
  outcome.expect_unital = unital::expect_unital_flag(point);
  unital::ReportDocument& doc = outcome.doc;
  doc.scenario = name;

  if (name == "three-lead") {
    const auto cfg = unital::parse_three_lead_config(point);
    fill_from_result(doc, unital::three_lead_demon(cfg));
  } else if (name == "one-d") {
    const auto cfg = unital::parse_one_d_config(point);
    fill_from_result(doc, unital::one_d_scatterer(cfg.s2, cfg.f_rr));
  } else if (name == "nspin") {
    auto cfg = unital::parse_nspin_config(point);
    if (max_n > 0) cfg.n_spins = max_n;
    doc.decay = unital::nspin_commutator_decay(cfg);
    doc.metadata = {
        {"scenario", "nspin"},
        {"n_spins", std::to_string(cfg.n_spins)},
        {"mode",
         cfg.mode == unital::NSpinMode::generic ? "generic" : "commuting_z"},
    };
  } else if (name == "tls-walk") {
    auto cfg = unital::parse_tls_config(point);
    if (seed_override.has_value()) cfg.seed = *seed_override;
    fill_from_result(doc, unital::tls_random_walk(cfg));
    if (!cfg.initial_basis_state.has_value()) doc.seed = cfg.seed;
  } else if (name == "diagonal") {
    const auto cfg = unital::parse_diagonal_config(point);
    fill_from_result(doc, unital::diagonal_reservoir_channel(
                              cfg.positions_weights, cfg.s_of_position));
  } else {
    throw unital::ConfigError("unknown scenario '" + name + "'");
  }

  if (seed_override.has_value() && !doc.seed.has_value()) {
    doc.seed = *seed_override;
  }
  if (outcome.expect_unital && doc.unitality_max_defect.has_value() &&
      *doc.unitality_max_defect > unital::kConstraintTol) {
    outcome.gate_failed = true;
  }
  return outcome;
}

std::vector<std::string> write_outputs(const fs::path& dir,
                                       const std::string& stem,
                                       const unital::ReportDocument& doc,
                                       const std::string& format) {
  std::vector<std::string> written;
  if (format == "json" || format == "both") {
    const fs::path p = dir / (stem + ".json");
    unital::write_file_atomic(p.string(), unital::to_json(doc));
    written.push_back(p.string());
  }
  if (format == "csv" || format == "both") {
    const fs::path p = dir / (stem + ".csv");
    unital::write_file_atomic(p.string(), unital::to_csv(doc));
    written.push_back(p.string());
  }
  return written;
}

std::string summarize(const unital::ReportDocument& doc,
                      const std::string& file) {
  std::string line = doc.scenario + ":";
  if (!doc.decay.empty()) {
    line += " N=" + std::to_string(doc.decay.back().first);
    line += " final_norm=" + fmt(doc.decay.back().second);
  } else if (!doc.trajectory.empty()) {
    const double total =
        doc.trajectory.back().s_out - doc.trajectory.front().s_in;
    line += " steps=" + std::to_string(doc.trajectory.size());
    line += " total_delta_s=" + fmt(total);
  }
  if (doc.unitality_max_defect.has_value()) {
    line += " unitality_defect=" + fmt(*doc.unitality_max_defect);
  }
  line += " -> " + file;
  return line;
}

int run_scenario_command(const std::string& name,
                         const std::string& config_path,
                         const std::string& output_dir, bool seed_given,
                         std::uint64_t seed, const std::string& format,
                         int jobs, int max_n) {
  if (max_n > 0 && name != "nspin") {
    throw unital::ConfigError("option --max-n applies to the nspin scenario");
  }
  const json_t root = unital::load_json_file(config_path);

  std::vector<json_t> points;
  if (root.is_array()) {
    points.assign(root.begin(), root.end());
  } else if (root.is_object() && root.contains("sweep")) {
    const json_t& sweep = root.at("sweep");
    if (!sweep.is_array() || sweep.empty()) {
      throw unital::ConfigError("config: field 'sweep' must be a nonempty array");
    }
    points.assign(sweep.begin(), sweep.end());
  } else {
    points.push_back(root);
  }
  if (points.empty()) {
    throw unital::ConfigError("config: no runs found");
  }

  // Fan one manifest seed out to per-run seeds so a sweep rerun reproduces
  // every run no matter how the work is scheduled.
  std::vector<std::optional<std::uint64_t>> seeds(points.size());
  if (seed_given) {
    if (points.size() == 1) {
      seeds[0] = seed;
    } else {
      unital::SplitMix64 stream(seed);
      for (auto& s : seeds) s = stream.next();
    }
  }

  std::vector<PointOutcome> outcomes(points.size());
  std::vector<std::string> failures(points.size());
  std::atomic<std::size_t> cursor{0};
  const std::size_t workers =
      std::min(static_cast<std::size_t>(jobs > 0 ? jobs : 1), points.size());
  auto worker = [&]() {
    while (true) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= points.size()) return;
      try {
        outcomes[k] = run_point(name, points[k], seeds[k], max_n);
      } catch (const std::exception& e) {
        failures[k] = e.what();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& message : failures) {
    if (!message.empty()) {
      std::cerr << "error: " << message << "\n";
      return 1;
    }
  }

  const fs::path dir = resolve_output_dir(output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  bool any_gate_failed = false;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    std::string stem = file_stem(name) + "_report";
    if (points.size() > 1) stem += "_" + std::to_string(k);
    const auto written = write_outputs(dir, stem, outcomes[k].doc, format);
    std::cout << summarize(outcomes[k].doc, written.front()) << "\n";
    if (outcomes[k].gate_failed) {
      any_gate_failed = true;
      std::cerr << "unitality gate: defect "
                << fmt(*outcomes[k].doc.unitality_max_defect)
                << " exceeds 1e-10 in run " << k << "\n";
    }
  }
  return any_gate_failed ? 2 : 0;
}

int run_check_command(const std::string& config_path,
                      const std::string& output_dir,
                      const std::string& format) {
  const json_t root = unital::load_json_file(config_path);
  const unital::ChannelSpec spec = unital::parse_channel_spec(root);

  unital::ReportDocument doc;
  doc.scenario = "check";
  doc.metadata = {
      {"dim_sys", std::to_string(spec.dim_sys)},
      {"dim_res", std::to_string(spec.dim_res)},
      {"blocks", std::to_string(spec.blocks.size())},
  };

  unital::UnitarityCheck worst_check{true, 0.0};
  for (const auto& block : spec.blocks) {
    const auto check = unital::check_unitarity_constraints(block);
    if (check.max_violation > worst_check.max_violation) {
      worst_check.max_violation = check.max_violation;
    }
    worst_check.pass = worst_check.pass && check.pass;
  }
  doc.constraints = worst_check;

  const fs::path dir = resolve_output_dir(output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);

  if (!worst_check.pass) {
    const auto written = write_outputs(dir, "check_report", doc, format);
    std::cout << "check: constraints FAIL (max violation "
              << fmt(worst_check.max_violation) << ") -> " << written.front()
              << "\n";
    std::cerr << "constraint violation: " << fmt(worst_check.max_violation)
              << " exceeds 1e-10\n";
    return 2;
  }

  std::vector<unital::DensityMatrix> rho_blocks;
  if (spec.rho_blocks.has_value()) {
    rho_blocks = *spec.rho_blocks;
  } else {
    for (const auto& block : spec.blocks) {
      rho_blocks.push_back(unital::DensityMatrix::maximally_mixed(block.dim_sys));
    }
  }

  double worst_criterion = -1.0;
  double worst_defect = 0.0;
  for (const auto& block : spec.blocks) {
    const auto crit =
        unital::unitality_criterion_defect(block, spec.reservoir_state);
    if (crit.max_abs > worst_criterion) {
      worst_criterion = crit.max_abs;
      doc.criterion = crit;
    }
    const auto phi = unital::channel_from_stinespring(
        unital::assemble_grand_unitary(block), spec.reservoir_state,
        block.dim_sys);
    worst_defect = std::max(worst_defect, unital::unitality_defect(phi).max_abs);
  }
  doc.unitality_max_defect = worst_defect;
  const unital::Verdict verdict = unital::h_theorem_verdict(
      spec.blocks, rho_blocks, spec.reservoir_state);
  doc.verdict = verdict;
  if (spec.rho_blocks.has_value()) {
    doc.trajectory.push_back(unital::blockwise_entropy_report(
        spec.blocks, rho_blocks, spec.reservoir_state));
  }

  const auto written = write_outputs(dir, "check_report", doc, format);
  std::string line = "check: constraints pass (max violation " +
                     fmt(worst_check.max_violation) + "), ";
  if (verdict.guaranteed) {
    line += "entropy gain guaranteed";
  } else {
    line += "no entropy guarantee, witness block " +
            std::to_string(verdict.witness->block_index) + " pair (" +
            std::to_string(verdict.witness->j) + ", " +
            std::to_string(verdict.witness->jp) + ")";
  }
  line += " -> " + written.front();
  std::cout << line << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unitality and entropy production of reservoir-coupled channels"};
  app.require_subcommand(1);

  std::string scenario_name;
  std::string config_path;
  std::string output_dir;
  std::string format = "json";
  std::uint64_t seed = 0;
  int jobs = 1;
  int max_n = 0;

  CLI::App* scen = app.add_subcommand("scenario", "run a built-in scenario");
  scen->add_option("name", scenario_name, "scenario to run")
      ->required()
      ->check(CLI::IsMember(
          {"three-lead", "one-d", "nspin", "tls-walk", "diagonal"}));
  scen->add_option("--config", config_path, "JSON run configuration")
      ->required();
  scen->add_option("--output", output_dir,
                   "report directory (default $UNITAL_LAB_OUTPUT or .)");
  CLI::Option* seed_opt =
      scen->add_option("--seed", seed, "override the run seed");
  scen->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv", "both"}));
  scen->add_option("--jobs", jobs, "worker threads for sweep configs")
      ->check(CLI::Range(1, 256));
  scen->add_option("--max-n", max_n, "largest spin count (nspin only)")
      ->check(CLI::Range(1, 64));

  std::string check_config;
  std::string check_output;
  std::string check_format = "json";
  CLI::App* check = app.add_subcommand("check", "evaluate a channel spec");
  check->add_option("--config", check_config, "channel spec JSON")->required();
  check->add_option("--output", check_output, "report directory");
  check->add_option("--format", check_format, "report format")
      ->check(CLI::IsMember({"json", "csv", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (scen->parsed()) {
      return run_scenario_command(scenario_name, config_path, output_dir,
                                  seed_opt->count() > 0, seed, format, jobs,
                                  max_n);
    }
    return run_check_command(check_config, check_output, check_format);
  } catch (const unital::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
