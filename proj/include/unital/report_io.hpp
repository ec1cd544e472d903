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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unital/channels.hpp"

namespace unital {

/// Everything a run can report. Sections left empty are omitted from the
/// emitted files. Emission is hand-rolled with a fixed field order and
/// fixed numeric formatting (17 significant digits in JSON, 12 in CSV) so
/// that identical runs produce byte-identical reports.
struct ReportDocument {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<double> unitality_max_defect;
  std::optional<CriterionDefect> criterion;
  std::optional<UnitarityCheck> constraints;
  std::optional<Verdict> verdict;
  std::vector<EntropyReport> trajectory;
  /// (n, commutator norm) rows for the decay scenario.
  std::vector<std::pair<int, double>> decay;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// %.17g, round-trip exact; -infinity encodes as the JSON string "-inf".
std::string format_json_number(double v);
/// %.12g; infinities print as inf / -inf.
std::string format_csv_number(double v);

std::string to_json(const ReportDocument& doc);

/// Trajectory rows `step,s_in,s_out,delta_s,eq1_bound` (step is 0-based),
/// or `n,commutator_norm` rows when the document carries a decay sequence.
std::string to_csv(const ReportDocument& doc);

/// Inverse of to_json; parse(to_json(d)) re-emits byte-identically.
ReportDocument parse_report_json(const std::string& text);

/// Write-to-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace unital
