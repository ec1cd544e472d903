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
#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "unital/report_io.hpp"

namespace fs = std::filesystem;
using namespace unital;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path fresh_dir() {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("unital_cli_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

/// Runs the CLI with the given arguments, discarding stdout and capturing
/// stderr next to the output directory. Returns the exit status.
int run_cli(const std::string& args, const fs::path& dir,
            std::string* stderr_text = nullptr) {
  const fs::path log = dir / "stderr.log";
  const std::string cmd = std::string(UNITAL_CLI_PATH) + " " + args +
                          " > /dev/null 2> " + log.string();
  const int raw = std::system(cmd.c_str());
  REQUIRE(raw != -1);
  if (stderr_text != nullptr) *stderr_text = slurp(log);
  REQUIRE(WIFEXITED(raw));
  return WEXITSTATUS(raw);
}

std::string config_path(const std::string& name) {
  return (fs::path(UNITAL_CONFIG_DIR) / name).string();
}

ReportDocument sample_document() {
  ReportDocument doc;
  doc.scenario = "three-lead";
  doc.seed = 42;
  doc.unitality_max_defect = 8.0 / 27.0;
  CriterionDefect crit;
  crit.matrix = CMatrix::Zero(2, 2);
  crit.matrix(0, 1) = Complex(0.0, 8.0 / 27.0);
  crit.matrix(1, 0) = Complex(0.0, -8.0 / 27.0);
  crit.max_abs = 8.0 / 27.0;
  doc.criterion = crit;
  UnitarityCheck check;
  check.pass = true;
  check.max_violation = 3.2e-16;
  doc.constraints = check;
  Verdict verdict;
  verdict.guaranteed = false;
  verdict.witness = VerdictWitness{0, 0, 1};
  doc.verdict = verdict;
  EntropyReport step0;
  step0.s_in = std::log(6.0);
  step0.s_out = 1.7456995142743184;
  step0.delta_s = -0.046059954953736604;
  step0.eq1_bound = -0.04605995495373616;
  EntropyReport step1;
  step1.s_in = step0.s_out;
  step1.s_out = step0.s_out;
  step1.delta_s = 0.0;
  step1.eq1_bound = -kInf;
  doc.trajectory = {step0, step1};
  doc.metadata = {{"kraus_rank", "4"},
                  {"note", "has \"quotes\" and a \\ backslash"}};
  return doc;
}

}  // namespace

TEST_CASE("json numbers survive a round trip bit for bit") {
  const std::vector<double> values{0.0,
                                   1.0,
                                   -1.0,
                                   0.1,
                                   8.0 / 27.0,
                                   -0.046059954953736604,
                                   std::log(2.0),
                                   1e-300,
                                   -1e308,
                                   5e-324};
  for (double v : values) {
    const std::string text = format_json_number(v);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
  CHECK(format_json_number(0.29629629629629628) == "0.29629629629629628");
  CHECK(format_json_number(-kInf) == "\"-inf\"");
  CHECK(format_json_number(kInf) == "\"inf\"");
  CHECK(format_json_number(std::nan("")) == "\"nan\"");
}

TEST_CASE("csv numbers use twelve significant digits") {
  CHECK(format_csv_number(0.25) == "0.25");
  CHECK(format_csv_number(2.0) == "2");
  CHECK(format_csv_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_csv_number(-0.046059954953736604) == "-0.0460599549537");
  CHECK(format_csv_number(-kInf) == "-inf");
}

TEST_CASE("documents re-emit byte for byte after parsing") {
  const ReportDocument doc = sample_document();
  const std::string first = to_json(doc);
  const ReportDocument back = parse_report_json(first);
  CHECK(to_json(back) == first);

  CHECK(back.scenario == "three-lead");
  REQUIRE(back.seed.has_value());
  CHECK(*back.seed == 42);
  REQUIRE(back.verdict.has_value());
  CHECK_FALSE(back.verdict->guaranteed);
  REQUIRE(back.verdict->witness.has_value());
  CHECK(back.verdict->witness->block_index == 0);
  CHECK(back.verdict->witness->jp == 1);
  REQUIRE(back.trajectory.size() == 2);
  CHECK(back.trajectory[0].delta_s == -0.046059954953736604);
  CHECK(std::isinf(back.trajectory[1].eq1_bound));
  CHECK(back.trajectory[1].eq1_bound < 0.0);
  REQUIRE(back.criterion.has_value());
  CHECK(back.criterion->matrix(0, 1) == Complex(0.0, 8.0 / 27.0));
  CHECK(back.metadata == doc.metadata);
}

TEST_CASE("decay documents round trip as well") {
  ReportDocument doc;
  doc.scenario = "nspin";
  doc.decay = {{1, 0.79397374011810196}, {2, 0.56}};
  const std::string first = to_json(doc);
  const ReportDocument back = parse_report_json(first);
  CHECK(to_json(back) == first);
  REQUIRE(back.decay.size() == 2);
  CHECK(back.decay[0].second == 0.79397374011810196);
}

TEST_CASE("csv emission is stable") {
  ReportDocument doc;
  doc.scenario = "three-lead";
  EntropyReport step;
  step.s_in = 1.791759469228055;
  step.s_out = 1.7456995142743184;
  step.delta_s = -0.046059954953736604;
  step.eq1_bound = -kInf;
  doc.trajectory = {step};
  CHECK(to_csv(doc) ==
        "step,s_in,s_out,delta_s,eq1_bound\n"
        "0,1.79175946923,1.74569951427,-0.0460599549537,-inf\n");

  ReportDocument decay_doc;
  decay_doc.scenario = "nspin";
  decay_doc.decay = {{1, 0.79397374011810196}, {12, 0.018843863346016176}};
  CHECK(to_csv(decay_doc) ==
        "n,commutator_norm\n"
        "1,0.793973740118\n"
        "12,0.018843863346\n");
}

TEST_CASE("malformed reports are rejected") {
  CHECK_THROWS_AS(parse_report_json("{"), ConfigError);
  CHECK_THROWS_AS(parse_report_json("[]"), ConfigError);
  CHECK_THROWS_AS(parse_report_json("{\"seed\": 1}"), ConfigError);
}

TEST_CASE("atomic writes leave no temporaries behind") {
  const fs::path dir = fresh_dir();
  const fs::path target = dir / "nested" / "report.json";
  write_file_atomic(target.string(), "hello\n");
  CHECK(slurp(target) == "hello\n");
  CHECK_FALSE(fs::exists(target.string() + ".tmp"));
  write_file_atomic(target.string(), "replaced\n");
  CHECK(slurp(target) == "replaced\n");
}

TEST_CASE("cli reproduces the junction report deterministically") {
  const fs::path dir = fresh_dir();
  const int code = run_cli("scenario three-lead --config " +
                               config_path("demon.json") + " --format both" +
                               " --output " + dir.string(),
                           dir);
  CHECK(code == 0);
  const fs::path report = dir / "three_lead_report.json";
  REQUIRE(fs::exists(report));
  CHECK(fs::exists(dir / "three_lead_report.csv"));

  const ReportDocument doc = parse_report_json(slurp(report));
  CHECK(doc.scenario == "three-lead");
  REQUIRE(doc.trajectory.size() == 1);
  CHECK(doc.trajectory[0].delta_s > -0.06);
  CHECK(doc.trajectory[0].delta_s < -0.04);
  REQUIRE(doc.unitality_max_defect.has_value());
  CHECK(*doc.unitality_max_defect ==
        doctest::Approx(8.0 / 27.0).epsilon(1e-12));

  const fs::path dir2 = fresh_dir();
  run_cli("scenario three-lead --config " + config_path("demon.json") +
              " --output " + dir2.string(),
          dir2);
  CHECK(slurp(dir2 / "three_lead_report.json") == slurp(report));
}

TEST_CASE("cli gates on expected unitality") {
  const fs::path dir = fresh_dir();
  const fs::path cfg = dir / "gated.json";
  write_file_atomic(cfg.string(),
                    "{\"scenario\": \"three-lead\", \"expect_unital\": true}\n");
  std::string err;
  const int code = run_cli("scenario three-lead --config " + cfg.string() +
                               " --output " + dir.string(),
                           dir, &err);
  CHECK(code == 2);
  CHECK(err.find("unitality gate") != std::string::npos);
  // The report is still written so the failure can be inspected.
  CHECK(fs::exists(dir / "three_lead_report.json"));
}

TEST_CASE("cli writes csv decay tables") {
  const fs::path dir = fresh_dir();
  const int code = run_cli("scenario nspin --config " +
                               config_path("decay.json") +
                               " --max-n 12 --format csv --output " +
                               dir.string(),
                           dir);
  CHECK(code == 0);
  std::istringstream rows(slurp(dir / "nspin_report.csv"));
  std::string line;
  REQUIRE(std::getline(rows, line));
  CHECK(line == "n,commutator_norm");
  double previous = kInf;
  int n_rows = 0;
  while (std::getline(rows, line)) {
    ++n_rows;
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(std::stoi(line.substr(0, comma)) == n_rows);
    const double value = std::strtod(line.c_str() + comma + 1, nullptr);
    CHECK(value < previous);
    previous = value;
  }
  CHECK(n_rows == 12);
}

TEST_CASE("cli surfaces the reuse sentinel") {
  const fs::path dir = fresh_dir();
  const int code = run_cli("scenario tls-walk --config " +
                               config_path("tls_reuse.json") + " --output " +
                               dir.string(),
                           dir);
  CHECK(code == 0);
  const std::string text = slurp(dir / "tls_walk_report.json");
  CHECK(text.find("\"-inf\"") != std::string::npos);
  const ReportDocument doc = parse_report_json(text);
  REQUIRE(doc.trajectory.size() == 6);
  CHECK(doc.trajectory[3].delta_s < -1e-6);
}

TEST_CASE("cli honors seeds for the walk") {
  const fs::path dir = fresh_dir();
  const std::string base = "scenario tls-walk --config " +
                           config_path("tls_fresh.json") + " --output " +
                           dir.string();
  CHECK(run_cli(base + " --seed 5", dir) == 0);
  const std::string first = slurp(dir / "tls_walk_report.json");
  CHECK(run_cli(base + " --seed 5", dir) == 0);
  CHECK(slurp(dir / "tls_walk_report.json") == first);
  CHECK(run_cli(base + " --seed 6", dir) == 0);
  CHECK(slurp(dir / "tls_walk_report.json") != first);
}

TEST_CASE("check reports verdicts with witnesses") {
  const fs::path dir = fresh_dir();
  CHECK(run_cli("check --config " + config_path("check_diagonal.json") +
                    " --output " + dir.string(),
                dir) == 0);
  const ReportDocument good = parse_report_json(slurp(dir / "check_report.json"));
  REQUIRE(good.verdict.has_value());
  CHECK(good.verdict->guaranteed);
  CHECK_FALSE(good.verdict->witness.has_value());
  REQUIRE_FALSE(good.trajectory.empty());
  CHECK(good.trajectory[0].delta_s >= good.trajectory[0].eq1_bound - 1e-8);

  const fs::path dir2 = fresh_dir();
  CHECK(run_cli("check --config " + config_path("check_demon.json") +
                    " --output " + dir2.string(),
                dir2) == 0);
  const ReportDocument bad = parse_report_json(slurp(dir2 / "check_report.json"));
  REQUIRE(bad.verdict.has_value());
  CHECK_FALSE(bad.verdict->guaranteed);
  REQUIRE(bad.verdict->witness.has_value());
  CHECK(bad.verdict->witness->block_index == 0);
  CHECK(bad.verdict->witness->j == 0);
  CHECK(bad.verdict->witness->jp == 1);
}

TEST_CASE("check exits two when the scattering data is inconsistent") {
  nlohmann::ordered_json spec;
  {
    std::ifstream in(config_path("check_demon.json"));
    REQUIRE(in.good());
    in >> spec;
  }
  // Scaling one amplitude breaks both closure conditions.
  spec["blocks"][0]["s"][0][1] = 0.9;
  const fs::path dir = fresh_dir();
  const fs::path cfg = dir / "broken.json";
  write_file_atomic(cfg.string(), spec.dump(2) + "\n");
  std::string err;
  const int code =
      run_cli("check --config " + cfg.string() + " --output " + dir.string(),
              dir, &err);
  CHECK(code == 2);
  CHECK(err.find("constraint") != std::string::npos);
  const ReportDocument doc = parse_report_json(slurp(dir / "check_report.json"));
  REQUIRE(doc.constraints.has_value());
  CHECK_FALSE(doc.constraints->pass);
}

TEST_CASE("configuration errors exit one with a named field") {
  const fs::path dir = fresh_dir();
  const fs::path cfg = dir / "broken.json";
  write_file_atomic(cfg.string(), "{\"scenario\": \"one-d\"}\n");
  std::string err;
  CHECK(run_cli("scenario one-d --config " + cfg.string() + " --output " +
                    dir.string(),
                dir, &err) == 1);
  CHECK(err.find("s2") != std::string::npos);

  write_file_atomic(cfg.string(), "{ not json\n");
  CHECK(run_cli("scenario one-d --config " + cfg.string() + " --output " +
                    dir.string(),
                dir, &err) == 1);
  CHECK(err.find("error") != std::string::npos);

  // A config whose scenario field contradicts the command line is refused.
  CHECK(run_cli("scenario one-d --config " + config_path("demon.json") +
                    " --output " + dir.string(),
                dir, &err) == 1);
}

TEST_CASE("identity scatterer passes its unitality gate") {
  const fs::path dir = fresh_dir();
  CHECK(run_cli("scenario one-d --config " + config_path("identity.json") +
                    " --output " + dir.string(),
                dir) == 0);
  const ReportDocument doc = parse_report_json(slurp(dir / "one_d_report.json"));
  REQUIRE_FALSE(doc.trajectory.empty());
  CHECK(std::abs(doc.trajectory[0].delta_s) <= 1e-10);

  const fs::path dir2 = fresh_dir();
  CHECK(run_cli("scenario one-d --config " + config_path("one_d.json") +
                    " --output " + dir2.string(),
                dir2) == 0);
}

TEST_CASE("environment variable steers the output directory") {
  const fs::path env_dir = fresh_dir();
  const fs::path flag_dir = fresh_dir();
  REQUIRE(setenv("UNITAL_LAB_OUTPUT", env_dir.string().c_str(), 1) == 0);
  CHECK(run_cli("scenario one-d --config " + config_path("identity.json"),
                env_dir) == 0);
  CHECK(fs::exists(env_dir / "one_d_report.json"));

  CHECK(run_cli("scenario one-d --config " + config_path("identity.json") +
                    " --output " + flag_dir.string(),
                flag_dir) == 0);
  CHECK(fs::exists(flag_dir / "one_d_report.json"));
  REQUIRE(unsetenv("UNITAL_LAB_OUTPUT") == 0);
}

TEST_CASE("sweeps fan out across workers") {
  nlohmann::ordered_json point;
  point["scenario"] = "three-lead";
  nlohmann::ordered_json sweep = nlohmann::ordered_json::array();
  for (double offdiag : {2.0 / 3.0, 0.6, 0.5}) {
    point["s_offdiag"] = offdiag;
    sweep.push_back(point);
  }
  const fs::path dir = fresh_dir();
  const fs::path cfg = dir / "sweep.json";
  write_file_atomic(cfg.string(), sweep.dump(2) + "\n");
  CHECK(run_cli("scenario three-lead --config " + cfg.string() +
                    " --jobs 2 --output " + dir.string(),
                dir) == 0);
  for (int k = 0; k < 3; ++k) {
    const fs::path report =
        dir / ("three_lead_report_" + std::to_string(k) + ".json");
    REQUIRE(fs::exists(report));
    CHECK(parse_report_json(slurp(report)).scenario == "three-lead");
  }
}
