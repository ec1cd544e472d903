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

#include "unital/report_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "unital/errors.hpp"

namespace unital {

namespace {

using json_t = nlohmann::ordered_json;

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string quote(const std::string& s) { return "\"" + escape_json(s) + "\""; }

std::string complex_json(const Complex& z) {
  return "[" + format_json_number(z.real()) + ", " +
         format_json_number(z.imag()) + "]";
}

std::string matrix_json(const CMatrix& m, const std::string& indent) {
  std::string out = "[\n";
  for (Index r = 0; r < m.rows(); ++r) {
    out += indent + "  [";
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ", ";
      out += complex_json(m(r, c));
    }
    out += "]";
    if (r + 1 < m.rows()) out += ",";
    out += "\n";
  }
  out += indent + "]";
  return out;
}

double read_number(const json_t& v, const std::string& where) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw ConfigError("report: field '" + where + "' is not a number");
  }
  if (!v.is_number()) {
    throw ConfigError("report: field '" + where + "' is not a number");
  }
  return v.get<double>();
}

CMatrix read_matrix(const json_t& v, const std::string& where) {
  if (!v.is_array() || v.empty()) {
    throw ConfigError("report: field '" + where + "' is not a matrix");
  }
  const Index rows = static_cast<Index>(v.size());
  const Index cols = static_cast<Index>(v.at(0).size());
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = v.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ConfigError("report: ragged matrix in field '" + where + "'");
    }
    for (Index c = 0; c < cols; ++c) {
      const auto& cell = row.at(static_cast<std::size_t>(c));
      if (!cell.is_array() || cell.size() != 2) {
        throw ConfigError("report: field '" + where +
                          "' entries must be [re, im] pairs");
      }
      m(r, c) = Complex(read_number(cell.at(0), where),
                        read_number(cell.at(1), where));
    }
  }
  return m;
}

}  // namespace

std::string format_json_number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v < 0 ? "\"-inf\"" : "\"inf\"";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_csv_number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string to_json(const ReportDocument& doc) {
  std::vector<std::string> fields;
  fields.push_back("  \"scenario\": " + quote(doc.scenario));
  if (doc.seed.has_value()) {
    fields.push_back("  \"seed\": " + std::to_string(*doc.seed));
  }
  if (doc.unitality_max_defect.has_value()) {
    fields.push_back("  \"unitality_max_defect\": " +
                     format_json_number(*doc.unitality_max_defect));
  }
  if (doc.criterion.has_value()) {
    std::string f = "  \"criterion\": {\n";
    f += "    \"max_abs\": " + format_json_number(doc.criterion->max_abs) +
         ",\n";
    f += "    \"matrix\": " + matrix_json(doc.criterion->matrix, "    ") + "\n";
    f += "  }";
    fields.push_back(std::move(f));
  }
  if (doc.constraints.has_value()) {
    std::string f = "  \"constraints\": {\n";
    f += std::string("    \"pass\": ") +
         (doc.constraints->pass ? "true" : "false") + ",\n";
    f += "    \"max_violation\": " +
         format_json_number(doc.constraints->max_violation) + "\n";
    f += "  }";
    fields.push_back(std::move(f));
  }
  if (doc.verdict.has_value()) {
    std::string f = "  \"verdict\": {\n";
    f += std::string("    \"guaranteed\": ") +
         (doc.verdict->guaranteed ? "true" : "false");
    if (doc.verdict->witness.has_value()) {
      const auto& w = *doc.verdict->witness;
      f += ",\n    \"witness\": {\"block\": " + std::to_string(w.block_index) +
           ", \"j\": " + std::to_string(w.j) +
           ", \"jp\": " + std::to_string(w.jp) + "}";
    }
    f += "\n  }";
    fields.push_back(std::move(f));
  }
  if (!doc.trajectory.empty()) {
    std::string f = "  \"trajectory\": [\n";
    for (std::size_t k = 0; k < doc.trajectory.size(); ++k) {
      const auto& row = doc.trajectory[k];
      f += "    {\"step\": " + std::to_string(k);
      f += ", \"s_in\": " + format_json_number(row.s_in);
      f += ", \"s_out\": " + format_json_number(row.s_out);
      f += ", \"delta_s\": " + format_json_number(row.delta_s);
      f += ", \"eq1_bound\": " + format_json_number(row.eq1_bound) + "}";
      if (k + 1 < doc.trajectory.size()) f += ",";
      f += "\n";
    }
    f += "  ]";
    fields.push_back(std::move(f));
  }
  if (!doc.decay.empty()) {
    std::string f = "  \"decay\": [\n";
    for (std::size_t k = 0; k < doc.decay.size(); ++k) {
      f += "    {\"n\": " + std::to_string(doc.decay[k].first);
      f += ", \"commutator_norm\": " + format_json_number(doc.decay[k].second) +
           "}";
      if (k + 1 < doc.decay.size()) f += ",";
      f += "\n";
    }
    f += "  ]";
    fields.push_back(std::move(f));
  }
  if (!doc.metadata.empty()) {
    std::string f = "  \"metadata\": {\n";
    for (std::size_t k = 0; k < doc.metadata.size(); ++k) {
      f += "    " + quote(doc.metadata[k].first) + ": " +
           quote(doc.metadata[k].second);
      if (k + 1 < doc.metadata.size()) f += ",";
      f += "\n";
    }
    f += "  }";
    fields.push_back(std::move(f));
  }

  std::string out = "{\n";
  for (std::size_t k = 0; k < fields.size(); ++k) {
    out += fields[k];
    if (k + 1 < fields.size()) out += ",";
    out += "\n";
  }
  out += "}\n";
  return out;
}

std::string to_csv(const ReportDocument& doc) {
  std::string out;
  if (!doc.decay.empty()) {
    out = "n,commutator_norm\n";
    for (const auto& [n, norm] : doc.decay) {
      out += std::to_string(n) + "," + format_csv_number(norm) + "\n";
    }
    return out;
  }
  out = "step,s_in,s_out,delta_s,eq1_bound\n";
  for (std::size_t k = 0; k < doc.trajectory.size(); ++k) {
    const auto& row = doc.trajectory[k];
    out += std::to_string(k);
    out += "," + format_csv_number(row.s_in);
    out += "," + format_csv_number(row.s_out);
    out += "," + format_csv_number(row.delta_s);
    out += "," + format_csv_number(row.eq1_bound);
    out += "\n";
  }
  return out;
}

ReportDocument parse_report_json(const std::string& text) {
  json_t j;
  try {
    j = json_t::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report: malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("scenario")) {
    throw ConfigError("report: missing field 'scenario'");
  }
  ReportDocument doc;
  doc.scenario = j.at("scenario").get<std::string>();
  if (j.contains("seed")) {
    doc.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("unitality_max_defect")) {
    doc.unitality_max_defect =
        read_number(j.at("unitality_max_defect"), "unitality_max_defect");
  }
  if (j.contains("criterion")) {
    const auto& c = j.at("criterion");
    CriterionDefect crit;
    crit.max_abs = read_number(c.at("max_abs"), "criterion.max_abs");
    crit.matrix = read_matrix(c.at("matrix"), "criterion.matrix");
    doc.criterion = std::move(crit);
  }
  if (j.contains("constraints")) {
    const auto& c = j.at("constraints");
    UnitarityCheck check;
    check.pass = c.at("pass").get<bool>();
    check.max_violation =
        read_number(c.at("max_violation"), "constraints.max_violation");
    doc.constraints = check;
  }
  if (j.contains("verdict")) {
    const auto& v = j.at("verdict");
    Verdict verdict;
    verdict.guaranteed = v.at("guaranteed").get<bool>();
    if (v.contains("witness")) {
      const auto& w = v.at("witness");
      VerdictWitness witness;
      witness.block_index = w.at("block").get<std::size_t>();
      witness.j = w.at("j").get<Index>();
      witness.jp = w.at("jp").get<Index>();
      verdict.witness = witness;
    }
    doc.verdict = verdict;
  }
  if (j.contains("trajectory")) {
    for (const auto& row : j.at("trajectory")) {
      EntropyReport rep;
      rep.s_in = read_number(row.at("s_in"), "trajectory.s_in");
      rep.s_out = read_number(row.at("s_out"), "trajectory.s_out");
      rep.delta_s = read_number(row.at("delta_s"), "trajectory.delta_s");
      rep.eq1_bound = read_number(row.at("eq1_bound"), "trajectory.eq1_bound");
      doc.trajectory.push_back(rep);
    }
  }
  if (j.contains("decay")) {
    for (const auto& row : j.at("decay")) {
      doc.decay.emplace_back(
          row.at("n").get<int>(),
          read_number(row.at("commutator_norm"), "decay.commutator_norm"));
    }
  }
  if (j.contains("metadata")) {
    for (const auto& [key, value] : j.at("metadata").items()) {
      doc.metadata.emplace_back(key, value.get<std::string>());
    }
  }
  return doc;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("cannot open '" + tmp.string() + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw Error("short write to '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    throw Error("cannot move report into place at '" + target.string() +
                "': " + ec.message());
  }
}

}  // namespace unital
