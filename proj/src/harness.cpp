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

#include "hyperqkd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hyperqkd/analytics.hpp"
#include "hyperqkd/errors.hpp"
#include "hyperqkd/physical_reference.hpp"
#include "hyperqkd/transcript_io.hpp"

namespace hyperqkd::harness {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kSigma = 5.0;

class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> linspace01(int n) {
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
  return grid;
}

void apply_defaults(RunSpec& spec) {
  if (spec.l0_list.empty()) {
    switch (spec.command) {
      case Command::Simulate:
      case Command::Bell: spec.l0_list = {1}; break;
      case Command::Compare: spec.l0_list = {1, 3}; break;
      case Command::Analytic:
      case Command::Figures: spec.l0_list = {1, 3, 5}; break;
    }
  }
  if (spec.eta_grid.empty()) {
    switch (spec.command) {
      case Command::Simulate: spec.eta_grid = {0.0}; break;
      case Command::Compare: spec.eta_grid = {0.0, 0.5, 1.0}; break;
      case Command::Bell: spec.eta_grid = {0.0, 0.25, 0.5, 0.75, 1.0}; break;
      case Command::Analytic: spec.eta_grid = linspace01(11); break;
      case Command::Figures: spec.eta_grid = linspace01(101); break;
    }
  }
  if (spec.command == Command::Figures && !spec.output_path) spec.output_path = "fig_data";
}

Table::Cell num(double x) { return x; }
Table::Cell count(std::uint64_t n) { return static_cast<std::int64_t>(n); }
Table::Cell text(std::string_view s) { return std::string(s); }

double z_score(double empirical, double reference, double se) {
  const double d = empirical - reference;
  if (se > 0) return d / se;
  return std::abs(d) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

// Mutual information of the key-only block of a count table, with the
// delta-method standard error of the plug-in estimator.
struct MutualInfoEstimate {
  double value = 0.0;
  double se = 0.0;
  double n = 0.0;
  int cells = 0;
};

JointDistribution key_block_normalized(const KeyTable<double>& t) {
  JointDistribution out(t.l0(), false);
  const double total = t.both_value_mass();
  if (total <= 0) throw NoKeyRounds("no rounds where both parties hold a key");
  for (int r = 0; r < out.dim(); ++r)
    for (int c = 0; c < out.dim(); ++c) out.at(r, c) = t.at(r, c) / total;
  return out;
}

MutualInfoEstimate mutual_info_estimate(const KeyTable<double>& counts) {
  const JointDistribution p = key_block_normalized(counts);
  MutualInfoEstimate est;
  est.n = counts.both_value_mass();
  est.value = analytics::mutual_info_of(p);
  est.cells = p.dim() * p.dim();
  double second = 0.0;
  for (int r = 0; r < p.dim(); ++r) {
    for (int c = 0; c < p.dim(); ++c) {
      const double x = p.at(r, c);
      if (x <= 0) continue;
      const double pmi = std::log2(x / (p.row_sum(r) * p.col_sum(c)));
      second += x * pmi * pmi;
    }
  }
  est.se = std::sqrt(std::max(second - est.value * est.value, 0.0) / est.n);
  return est;
}

// Largest cellwise |z| of an empirical count table against a reference
// distribution.
double max_cell_z(const KeyTable<double>& counts, const JointDistribution& ref) {
  const double n = counts.total();
  double worst = 0.0;
  for (int r = 0; r < ref.dim(); ++r) {
    for (int c = 0; c < ref.dim(); ++c) {
      const double p = ref.at(r, c);
      const double se = std::sqrt(std::max(p * (1 - p), 0.0) / n);
      worst = std::max(worst, std::abs(z_score(counts.at(r, c) / n, p, se)));
    }
  }
  return worst;
}

// Same, for Bob's outcome conditional on Alice's row.
double max_row_z(const KeyTable<double>& counts, const JointDistribution& ref, int row) {
  const double n = counts.row_sum(row);
  const double ref_total = ref.row_sum(row);
  if (n == 0 || ref_total == 0) return 0.0;
  double worst = 0.0;
  for (int c = 0; c < ref.dim(); ++c) {
    const double q = ref.at(row, c) / ref_total;
    const double se = std::sqrt(std::max(q * (1 - q), 0.0) / n);
    worst = std::max(worst, std::abs(z_score(counts.at(row, c) / n, q, se)));
  }
  return worst;
}

JointDistribution key_only(const JointDistribution& full) {
  JointDistribution out(full.l0(), false);
  const double f = full.both_value_mass();
  for (int r = 0; r < out.dim(); ++r)
    for (int c = 0; c < out.dim(); ++c) out.at(r, c) = full.at(r, c) / f;
  return out;
}

fs::path output_file(const RunSpec& spec, const std::string& stem, std::string_view ext) {
  fs::path dir(*spec.output_path);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
  return dir / (stem + std::string(ext));
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void save_table(const RunSpec& spec, const std::string& stem, const Table& table) {
  const fs::path path =
      output_file(spec, stem, spec.format == OutputFormat::Csv ? ".csv" : ".json");
  std::ofstream out = open_output(path);
  write_table(out, table, spec);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ProtocolConfig point_config(const RunSpec& spec, int l0, double eta) {
  ProtocolConfig c = spec.config;
  c.l0 = l0;
  c.eta = eta;
  c.validate();
  return c;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Analytic: return "analytic";
    case Command::Simulate: return "simulate";
    case Command::Bell: return "bell";
    case Command::Compare: return "compare";
    case Command::Figures: return "figures";
  }
  return "analytic";
}

RunSpec parse_run_spec(int argc, const char* const* argv) {
  CLI::App app{"Hyperentangled OAM/TAM key distribution simulator", "hyperqkd_cli"};
  app.require_subcommand(1, 1);

  std::vector<int> l0s;
  std::vector<double> etas;
  int eta_grid_points = 0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  std::string model = "paper-ideal";
  double bell_fraction = 0.1;
  double disclose_fraction = 0.1;
  std::optional<double> epsilon;
  std::string format = "csv";
  std::string out;
  bool strict = false;
  unsigned workers = 0;

  const std::pair<Command, const char*> commands[] = {
      {Command::Analytic, "closed-form rates and baselines"},
      {Command::Simulate, "Monte Carlo sessions and transcripts"},
      {Command::Bell, "CHSH and visibility from simulated Bell rounds"},
      {Command::Compare, "Monte Carlo against exact and closed-form references"},
      {Command::Figures, "data behind the error-rate and key-rate figures"}};
  std::map<CLI::App*, Command> by_app;
  for (const auto& [cmd, description] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(cmd)), description);
    by_app[sub] = cmd;
    sub->add_option("--l0", l0s, "alphabet half-width (repeatable)")->check(CLI::PositiveNumber);
    auto* eta = sub->add_option("--eta", etas, "eavesdropping fraction (repeatable)")
                    ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--eta-grid", eta_grid_points, "N evenly spaced eta values on [0, 1]")
        ->check(CLI::Range(2, 1000001))
        ->excludes(eta);
    sub->add_option("--trials", trials, "protocol rounds per point")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "64-bit seed");
    sub->add_option("--source-model", model, "physical or paper-ideal")
        ->check(CLI::IsMember({"physical", "paper-ideal"}));
    sub->add_option("--bell-fraction", bell_fraction, "share of sifted rounds used for Bell tests")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--disclose-fraction", disclose_fraction,
                    "share of key rounds disclosed for error estimation")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--epsilon", epsilon, "override the beam-splitter bias")
        ->check(CLI::Range(0.0, 0.4999999999));
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out, "output directory");
    sub->add_flag("--strict", strict, "exit 2 on any 5-sigma validation flag");
    sub->add_option("--workers", workers, "worker threads (0 = all cores)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunSpec spec;
  spec.command = by_app.at(app.get_subcommands().front());
  spec.l0_list = l0s;
  std::sort(spec.l0_list.begin(), spec.l0_list.end());
  if (std::adjacent_find(spec.l0_list.begin(), spec.l0_list.end()) != spec.l0_list.end()) {
    throw UsageError("--l0: duplicate values");
  }
  if (eta_grid_points > 0) {
    spec.eta_grid = linspace01(eta_grid_points);
  } else {
    spec.eta_grid = etas;
    std::sort(spec.eta_grid.begin(), spec.eta_grid.end());
    if (std::adjacent_find(spec.eta_grid.begin(), spec.eta_grid.end()) != spec.eta_grid.end()) {
      throw UsageError("--eta: duplicate values");
    }
  }
  spec.config.trials = trials;
  spec.config.seed = seed;
  spec.config.source_model = parse_source_model(model);
  spec.config.bell_fraction = bell_fraction;
  spec.config.disclose_fraction = disclose_fraction;
  spec.config.epsilon_override = epsilon;
  spec.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  if (!out.empty()) spec.output_path = out;
  spec.strict = strict;
  spec.workers = workers;
  apply_defaults(spec);
  return spec;
}

Json runspec_to_json(const RunSpec& spec) {
  Json config = config_to_json(spec.config);
  config.erase("l0");
  config.erase("eta");
  config.erase("epsilon");
  return Json{{"command", std::string(to_string(spec.command))},
              {"l0_list", spec.l0_list},
              {"eta_grid", spec.eta_grid},
              {"config", config},
              {"output_path", spec.output_path ? Json(*spec.output_path) : Json(nullptr)},
              {"format", spec.format == OutputFormat::Csv ? "csv" : "json"},
              {"strict", spec.strict}};
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.12g}", x);
}

void write_table(std::ostream& out, const Table& table, const RunSpec& spec) {
  if (spec.format == OutputFormat::Csv) {
    out << "# runspec: " << runspec_to_json(spec).dump() << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        std::visit(
            [&](const auto& v) {
              using V = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<V, double>) {
                out << format_number(v);
              } else {
                out << v;
              }
            },
            row[i]);
      }
      out << '\n';
    }
    return;
  }
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
              // Same 12 significant digits as CSV; non-finite values as strings.
              if (std::isfinite(v)) {
                obj[table.columns[i]] = std::stod(format_number(v));
              } else {
                obj[table.columns[i]] = format_number(v);
              }
            } else {
              obj[table.columns[i]] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(obj));
  }
  out << Json{{"runspec", runspec_to_json(spec)}, {"rows", rows}}.dump(2) << '\n';
}

Table run_analytic(const RunSpec& spec) {
  Table t{{"l0", "eta", "e_closed", "e_from_distribution", "f", "I_AB", "I_AB_of_pk", "I_E",
           "kappa", "H_undisturbed", "bb84_e", "bb84_I_AB", "bb84_I_E", "bb84_kappa",
           "competing_oam_e"},
          {}};
  for (int l0 : spec.l0_list) {
    for (double eta : spec.eta_grid) {
      const analytics::RatePoint r = analytics::rate_point(l0, eta);
      const analytics::Bb84Point b = analytics::bb84_baseline(eta);
      t.rows.push_back({count(static_cast<std::uint64_t>(l0)), num(eta), num(r.e),
                        num(r.e_from_distribution), num(r.f), num(r.mutual_info),
                        num(analytics::mutual_info_of(analytics::pk(l0, eta))), num(r.eve_info),
                        num(r.kappa), num(r.undisturbed_entropy), num(b.e), num(b.mutual_info),
                        num(b.eve_info), num(b.kappa), num(analytics::competing_oam_error(l0, eta))});
    }
  }
  return t;
}

SimulateOutput run_simulate(const RunSpec& spec) {
  SimulateOutput out;
  out.summary = {{"l0", "eta", "model", "trials", "sifted", "key_rounds", "bell_rounds",
                  "both_key", "f_hat", "f_std_error", "n_disclosed", "e_hat", "e_std_error",
                  "I_hat", "I_std_error"},
                 {}};
  for (int l0 : spec.l0_list) {
    for (double eta : spec.eta_grid) {
      const ProtocolConfig config = point_config(spec, l0, eta);
      Transcript t = run_session(config, spec.workers);
      const TranscriptSummary& s = t.summary;
      const double kr = static_cast<double>(s.key_rounds);
      const double f_hat = kr > 0 ? static_cast<double>(s.both_key) / kr : std::nan("");
      const double f_se = kr > 0 ? std::sqrt(f_hat * (1 - f_hat) / kr) : std::nan("");
      double e_hat = std::nan("");
      double e_se = std::nan("");
      std::uint64_t n_disclosed = 0;
      if (s.disclosed_both_key > 0) {
        const ErrorEstimate e = estimate_error(t);
        e_hat = e.e_hat;
        e_se = e.std_error;
        n_disclosed = e.n_disclosed;
      }
      MutualInfoEstimate mi{std::nan(""), std::nan(""), 0, 0};
      if (s.both_key > 0) mi = mutual_info_estimate(key_round_counts(t));
      out.summary.rows.push_back({count(static_cast<std::uint64_t>(l0)), num(eta),
                                  text(to_string(config.source_model)), count(s.trials),
                                  count(s.sifted), count(s.key_rounds), count(s.bell_rounds),
                                  count(s.both_key), num(f_hat), num(f_se), count(n_disclosed),
                                  num(e_hat), num(e_se), num(mi.value), num(mi.se)});
      out.transcripts.emplace_back(
          fmt::format("transcript_l0-{}_eta-{}", l0, format_number(eta)), std::move(t));
    }
  }
  return out;
}

CheckedTable run_compare(const RunSpec& spec) {
  CheckedTable out;
  out.table = {{"l0", "eta", "model", "quantity", "reference", "reference_value", "empirical",
                "std_error", "n", "z", "status"},
               {}};
  auto add = [&](int l0, double eta, SourceModel model, const std::string& quantity,
                 const std::string& reference, double ref, double emp, double se, double n,
                 double z, const std::string& status) {
    out.table.rows.push_back({count(static_cast<std::uint64_t>(l0)), num(eta),
                              text(to_string(model)), text(quantity), text(reference), num(ref),
                              num(emp), num(se), count(static_cast<std::uint64_t>(n)), num(z),
                              text(status)});
    if (status == "FLAG") out.flagged = true;
  };

  for (int l0 : spec.l0_list) {
    for (double eta : spec.eta_grid) {
      const JointDistribution ideal = analytics::pab(l0, eta);
      const double ideal_e = analytics::error_rate_from_distribution(ideal);
      for (SourceModel model : {SourceModel::PaperIdeal, SourceModel::Physical}) {
        ProtocolConfig config = point_config(spec, l0, eta);
        config.source_model = model;
        const Transcript t = run_session(config, spec.workers);
        const KeyTable<double> counts = key_round_counts(t);
        const JointDistribution exact = model == SourceModel::PaperIdeal
                                            ? ideal
                                            : physical_joint_distribution(l0, eta, config.epsilon());

        auto verdict = [](double z) { return std::abs(z) <= kSigma ? "ok" : "FLAG"; };
        auto agreement = [](double z) { return std::abs(z) <= kSigma ? "agree" : "diverges"; };

        // Error rate on disclosed rounds.
        if (t.summary.disclosed_both_key > 0) {
          const ErrorEstimate e = estimate_error(t);
          const double n = static_cast<double>(e.n_disclosed);
          const double exact_e = analytics::error_rate_from_distribution(exact);
          const double se_exact = std::sqrt(exact_e * (1 - exact_e) / n);
          const double z_exact = z_score(e.e_hat, exact_e, se_exact);
          add(l0, eta, model, "e", "model_exact", exact_e, e.e_hat, se_exact, n, z_exact,
              verdict(z_exact));
          const double closed = analytics::error_rate_closed(l0, eta);
          const double se_closed = std::sqrt(closed * (1 - closed) / n);
          const double z_closed = z_score(e.e_hat, closed, se_closed);
          add(l0, eta, model, "e", "closed_form", closed, e.e_hat, se_closed, n, z_closed,
              agreement(z_closed));
          const double se_ideal = std::sqrt(ideal_e * (1 - ideal_e) / n);
          const double z_ideal = z_score(e.e_hat, ideal_e, se_ideal);
          add(l0, eta, model, "e", "from_distribution", ideal_e, e.e_hat, se_ideal, n, z_ideal,
              agreement(z_ideal));
        }

        // Key fraction among sifted key rounds.
        const double n_key = counts.total();
        const double f_hat = counts.both_value_mass() / n_key;
        for (const auto& [name, ref] :
             {std::pair<std::string, double>{"model_exact", exact.both_value_mass()},
              {"closed_form", analytics::key_fraction_closed(l0, eta)}}) {
          const double se = std::sqrt(ref * (1 - ref) / n_key);
          const double z = z_score(f_hat, ref, se);
          add(l0, eta, model, "f", name, ref, f_hat, se, n_key, z,
              name == "model_exact" ? verdict(z) : agreement(z));
        }

        // Mutual information of key-generating rounds.
        const MutualInfoEstimate mi = mutual_info_estimate(counts);
        const double bias = (mi.cells - 1) / (2.0 * mi.n * std::numbers::ln2);
        for (const auto& [name, ref] :
             {std::pair<std::string, double>{"model_exact", analytics::mutual_info_of(key_only(exact))},
              {"closed_form", analytics::mutual_info_closed(l0, eta)},
              {"of_pk", analytics::mutual_info_of(analytics::pk(l0, eta))}}) {
          const double z = z_score(mi.value, ref, mi.se);
          const bool within = std::abs(mi.value - ref) <= kSigma * mi.se + bias;
          add(l0, eta, model, "I", name, ref, mi.value, mi.se, mi.n, z,
              name == "model_exact" ? (within ? "ok" : "FLAG") : (within ? "agree" : "diverges"));
        }

        // Whole joint distribution, cell by cell.
        const double z_cells = max_cell_z(counts, exact);
        add(l0, eta, model, "joint_max_abs_z", "model_exact", 0.0, z_cells, 1.0, n_key, z_cells,
            verdict(z_cells));
        if (model == SourceModel::Physical) {
          const double z_ideal = max_cell_z(counts, ideal);
          add(l0, eta, model, "joint_max_abs_z", "pab", 0.0, z_ideal, 1.0, n_key, z_ideal,
              agreement(z_ideal));
          // Bob's outcome conditional on Alice's key, against the ideal model.
          for (int k = -l0; k <= l0; ++k) {
            const int row = k + l0;
            const double z = max_row_z(counts, ideal, row);
            const bool interior = std::abs(k) <= l0 - 2;
            std::string status = agreement(z);
            if (status == "diverges" && !interior) status = "edge-exempt";
            add(l0, eta, model, fmt::format("row_k={}_max_abs_z", k), "pab", 0.0, z, 1.0,
                counts.row_sum(row), z, status);
          }
        }
      }
    }
  }
  return out;
}

CheckedTable run_bell(const RunSpec& spec) {
  CheckedTable out;
  out.table = {{"l0", "eta", "chsh_rounds", "sweep_rounds", "S_hat", "S_std_error", "S_expected",
                "V_hat", "V_std_error", "V_bound", "V_mismatched", "V_mismatched_std_error",
                "status"},
               {}};
  for (int l0 : spec.l0_list) {
    for (double eta : spec.eta_grid) {
      ProtocolConfig config = point_config(spec, l0, eta);
      config.source_model = SourceModel::Physical;
      const BellResult b = bell_test(config, config.bell, spec.workers);
      // Eve's wrong-variable sort leaves circular product spins with E = 0.
      const double s_expected = (1.0 - eta / 2.0) * 2.0 * std::numbers::sqrt2;
      const double v_bound = 1.0 - (1.0 - 1.0 / std::numbers::sqrt2) * eta;
      const bool v_ok = b.v_hat <= v_bound + kSigma * b.v_std_error;
      const bool s_ok = std::abs(b.s_hat - s_expected) <= kSigma * b.s_std_error;
      if (!(v_ok && s_ok)) out.flagged = true;
      out.table.rows.push_back(
          {count(static_cast<std::uint64_t>(l0)), num(eta), count(b.chsh_rounds),
           count(b.sweep_rounds), num(b.s_hat), num(b.s_std_error), num(s_expected), num(b.v_hat),
           num(b.v_std_error), num(v_bound), num(b.v_mismatched.value_or(std::nan(""))),
           num(b.v_mismatched_std_error.value_or(std::nan(""))),
           text(v_ok && s_ok ? "ok" : "FLAG")});
    }
  }
  return out;
}

std::map<std::string, Table> run_figures(const RunSpec& spec) {
  std::map<std::string, Table> files;
  const std::vector<std::string> columns = {"x", "series", "value"};

  Table fig4{columns, {}};
  for (double eta : {1.0, 0.5, 0.1}) {
    const std::string name = "eta=" + format_number(eta);
    for (int l0 = 1; l0 <= 25; ++l0) {
      fig4.rows.push_back({num(l0), text(name), num(analytics::error_rate_closed(l0, eta))});
    }
    for (int l0 = 1; l0 <= 25; ++l0) {
      fig4.rows.push_back({num(l0), text("bb84 " + name), num(analytics::bb84_baseline(eta).e)});
    }
  }
  files["fig4"] = std::move(fig4);

  Table fig6a{columns, {}};
  for (const char* series : {"I_AB", "I_E", "kappa"}) {
    for (double eta : spec.eta_grid) {
      const analytics::Bb84Point b = analytics::bb84_baseline(eta);
      const std::string_view s = series;
      fig6a.rows.push_back(
          {num(eta), text(s), num(s == "I_AB" ? b.mutual_info : s == "I_E" ? b.eve_info : b.kappa)});
    }
  }
  files["fig6a"] = std::move(fig6a);

  const char* panels[] = {"fig6b", "fig6c", "fig6d"};
  for (std::size_t i = 0; i < spec.l0_list.size() && i < 3; ++i) {
    const int l0 = spec.l0_list[i];
    Table panel{columns, {}};
    for (const char* series : {"I_AB", "I_E", "kappa"}) {
      for (double eta : spec.eta_grid) {
        const std::string_view s = series;
        const double v = s == "I_AB"  ? analytics::mutual_info_closed(l0, eta)
                         : s == "I_E" ? analytics::eve_information(l0, eta)
                                      : analytics::secret_key_rate(l0, eta);
        panel.rows.push_back({num(eta), text(fmt::format("{} l0={}", s, l0)), num(v)});
      }
    }
    files[panels[i]] = std::move(panel);
  }
  return files;
}

int execute(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    auto emit = [&](const std::string& stem, const Table& table) {
      if (spec.output_path) {
        save_table(spec, stem, table);
      } else {
        write_table(out, table, spec);
      }
    };
    switch (spec.command) {
      case Command::Analytic: emit("analytic", run_analytic(spec)); return 0;
      case Command::Simulate: {
        const SimulateOutput sim = run_simulate(spec);
        if (spec.output_path) {
          for (const auto& [stem, transcript] : sim.transcripts) {
            const fs::path path = output_file(spec, stem, ".jsonl");
            std::ofstream file = open_output(path);
            write_transcript(file, transcript);
            if (!file) throw std::runtime_error("write failed for " + path.string());
          }
        }
        emit("simulate", sim.summary);
        return 0;
      }
      case Command::Compare: {
        const CheckedTable c = run_compare(spec);
        emit("compare", c.table);
        if (c.flagged) err << "compare: at least one 5-sigma flag raised\n";
        return spec.strict && c.flagged ? 2 : 0;
      }
      case Command::Bell: {
        const CheckedTable c = run_bell(spec);
        emit("bell", c.table);
        if (c.flagged) err << "bell: at least one 5-sigma flag raised\n";
        return spec.strict && c.flagged ? 2 : 0;
      }
      case Command::Figures:
        for (const auto& [stem, table] : run_figures(spec)) save_table(spec, stem, table);
        return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunSpec spec;
  try {
    spec = parse_run_spec(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  }
  return execute(spec, out, err);
}

}  // namespace hyperqkd::harness
