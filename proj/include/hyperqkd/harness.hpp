// Copyright 2026 The hyperqkd Authors
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
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hyperqkd/protocol.hpp"

namespace hyperqkd::harness {

enum class Command { Analytic, Simulate, Bell, Compare, Figures };
enum class OutputFormat { Csv, Json };

/// Bad command line; the message names the offending flag.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSpec {
  Command command = Command::Analytic;
  /// Per-point protocol settings; l0 and eta are overwritten by the sweep.
  ProtocolConfig config;
  std::vector<int> l0_list;
  std::vector<double> eta_grid;
  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::Csv;
  /// Exit with status 2 when compare/bell raise a 5-sigma flag.
  bool strict = false;
  unsigned workers = 0;
};

/// Parses `<command> [flags]` (argv[0] is the program name).
/// Throws UsageError on any invalid flag or value.
RunSpec parse_run_spec(int argc, const char* const* argv);

nlohmann::ordered_json runspec_to_json(const RunSpec& spec);

std::string_view to_string(Command c);

/// A report: named columns and rows of text or numbers.
struct Table {
  using Cell = std::variant<std::string, double, std::int64_t>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Numbers are printed with 12 significant digits.
std::string format_number(double x);

/// CSV: a "# runspec: {...}" comment line, the header row, then the rows.
/// JSON: {"runspec": ..., "rows": [{column: value, ...}, ...]}.
void write_table(std::ostream& out, const Table& table, const RunSpec& spec);

/// Closed-form rates, discrepancy columns and baselines per (l0, eta).
Table run_analytic(const RunSpec& spec);

struct SimulateOutput {
  Table summary;
  std::vector<std::pair<std::string, Transcript>> transcripts;  // file stem, transcript
};
SimulateOutput run_simulate(const RunSpec& spec);

struct CheckedTable {
  Table table;
  bool flagged = false;  // any 5-sigma failure against a reference the model should match
};

/// Both source models against their exact references and the closed forms.
CheckedTable run_compare(const RunSpec& spec);

/// S_hat and V_hat per eta with standard errors and the visibility bound.
CheckedTable run_bell(const RunSpec& spec);

/// fig4, fig6a..fig6d keyed by file stem; columns x, series, value.
std::map<std::string, Table> run_figures(const RunSpec& spec);

/// Runs the command, writing files under spec.output_path when set (a
/// directory) or the report to `out`. Returns the process exit status:
/// 0 success, 2 runtime or strict validation failure.
int execute(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// Full CLI entry point, including usage errors (exit status 1).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hyperqkd::harness
