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

// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures. Criterion ids given on the command line restrict the run.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hyperqkd/analytics.hpp"
#include "hyperqkd/harness.hpp"
#include "hyperqkd/protocol.hpp"
#include "hyperqkd/spin_density.hpp"
#include "hyperqkd/two_photon_state.hpp"

namespace {

using namespace hyperqkd;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> check;
};

std::vector<double> grid(int n, double lo, double hi) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return g;
}

TwoPhotonState product_state(std::complex<double> a_r, std::complex<double> a_l,
                             std::complex<double> b_r, std::complex<double> b_l) {
  TwoPhotonState::Terms t;
  const std::complex<double> a[] = {a_r, a_l};
  const std::complex<double> b[] = {b_r, b_l};
  const int spin[] = {1, -1};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) t[{{0, spin[i]}, {0, spin[k]}}] = a[i] * b[k];
  return TwoPhotonState::normalized(0, t);
}

Outcome coincidence_law() {
  double worst = 0.0;
  const auto angles = grid(19, 0.0, kPi);
  for (const auto& state : {spin_singlet(0), make_source_state(1), make_source_state(3)}) {
    const SpinDensity rho = spin_density(state);
    for (double t : angles) {
      for (double p : angles) {
        const double got =
            polarization_coincidence(rho, PolarizationAngle(t), PolarizationAngle(p));
        const double s = std::sin(t - p);
        worst = std::max(worst, std::abs(got - 0.5 * s * s));
      }
    }
  }
  return {worst <= 1e-12, fmt::format("max |C - sin^2/2| = {:.3g} over 19x19 grid", worst)};
}

Outcome chsh() {
  const double s = chsh_value(spin_singlet(0), ChshAngles{});
  double worst = -1.0;
  const std::complex<double> i(0.0, 1.0);
  for (double g : grid(37, 0.0, kPi)) {
    // Linear analyzer-aligned products and elliptical products.
    const auto linear = product_state(std::exp(i * g), std::exp(-i * g), std::exp(i * (g + kPi / 2)),
                                      std::exp(-i * (g + kPi / 2)));
    const auto elliptic = product_state(std::cos(g / 2), std::sin(g / 2), std::sin(g / 2),
                                        -std::cos(g / 2) * std::exp(i * g));
    worst = std::max({worst, std::abs(chsh_value(linear, ChshAngles{})),
                      std::abs(chsh_value(elliptic, ChshAngles{}))});
  }
  const bool ok = std::abs(s - 2 * std::numbers::sqrt2) <= 1e-9 && worst <= 2 + 1e-9;
  return {ok, fmt::format("S(singlet) = {:.12f}, max |S| over 74 products = {:.6f}", s, worst)};
}

Outcome collapse_rule() {
  double mixed_worst = 0.0;
  double same_worst = 0.0;
  int edge_separable = 0;
  for (int l0 = 1; l0 <= 3; ++l0) {
    const auto src = make_source_state(l0);
    for (const auto& [j, pj] : born_distribution(src, Party::A, Observable::TAM)) {
      const auto a = project_onto(src, Party::A, Observable::TAM, j);
      for (const auto& [l, pl] : born_distribution(a.collapsed, Party::B, Observable::OAM)) {
        const auto b = project_onto(a.collapsed, Party::B, Observable::OAM, l);
        mixed_worst = std::max(mixed_worst, negativity(spin_density(b.collapsed)));
        const auto relabelled = spin_flip(erase_oam(b.collapsed, Party::A), Party::B);
        mixed_worst = std::max(mixed_worst, negativity(spin_density(relabelled)));
      }
      const auto b = project_onto(a.collapsed, Party::B, Observable::TAM, -j);
      const auto erased = erase_oam(erase_oam(b.collapsed, Party::A), Party::B);
      if (std::abs(j) <= l0 - 1) {
        same_worst = std::max(same_worst, std::abs(negativity(spin_density(erased)) - 0.5));
      } else {
        ++edge_separable;
      }
    }
    for (const auto& [l, pl] : born_distribution(src, Party::A, Observable::OAM)) {
      const auto a = project_onto(src, Party::A, Observable::OAM, l);
      const auto b = project_onto(a.collapsed, Party::B, Observable::OAM, -l);
      const auto erased = erase_oam(erase_oam(b.collapsed, Party::A), Party::B);
      same_worst = std::max(same_worst, std::abs(negativity(spin_density(erased)) - 0.5));
    }
  }
  const bool ok = mixed_worst <= 1e-12 && same_worst <= 1e-12;
  return {ok, fmt::format("mixed-variable max N = {:.3g}; same-variable max |N - 0.5| = {:.3g} "
                          "(OAM and interior TAM; {} single-term edge outcomes excluded)",
                          mixed_worst, same_worst, edge_separable)};
}

Outcome erasure_fidelity() {
  double worst = 1.0;
  int cases = 0;
  for (int l0 = 1; l0 <= 5; ++l0) {
    const auto src = make_source_state(l0);
    for (int j = -(l0 - 1); j <= l0 - 1; ++j) {
      const auto a = project_onto(src, Party::A, Observable::TAM, j);
      const auto b = project_onto(a.collapsed, Party::B, Observable::TAM, -j);
      const auto erased = erase_oam(erase_oam(b.collapsed, Party::A), Party::B);
      worst = std::min(worst, fidelity(erased, spin_singlet(l0)));
      ++cases;
    }
  }
  return {worst >= 1 - 1e-12, fmt::format("min fidelity = {:.15f} over {} interior outcomes", worst, cases)};
}

Outcome visibility_bound() {
  bool ok = true;
  std::string detail;
  for (double eta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    ProtocolConfig c;
    c.l0 = 3;
    c.eta = eta;
    c.trials = 260000;
    c.seed = 2026;
    c.source_model = SourceModel::Physical;
    c.bell_fraction = 1.0;
    const BellResult b = bell_test(c, BellSettings{});
    const double bound = 1.0 - (1.0 - 1.0 / std::numbers::sqrt2) * eta;
    const bool point_ok = b.counted_rounds() >= 100000 && b.v_hat <= bound + 5 * b.v_std_error;
    ok = ok && point_ok;
    detail += fmt::format("{}eta={}: V={:.4f}+-{:.4f} bound={:.4f} n={}", detail.empty() ? "" : "; ",
                          eta, b.v_hat, b.v_std_error, bound, b.counted_rounds());
  }
  return {ok, detail};
}

Outcome key_fraction() {
  double worst = 0.0;
  for (int l0 = 1; l0 <= 10; ++l0) {
    for (double eta : grid(11, 0.0, 1.0)) {
      worst = std::max(worst, std::abs(analytics::key_fraction_closed(l0, eta) -
                                       analytics::pab(l0, eta).both_value_mass()));
    }
  }
  const Rational f11 = analytics::key_fraction_closed_exact(1, Rational(1));
  const Rational f10 = analytics::key_fraction_closed_exact(1, Rational(0));
  const bool exact = f11 == Rational(5, 7) && f10 == Rational(6, 7) &&
                     analytics::pab_exact(1, Rational(1)).both_value_mass() == f11 &&
                     analytics::pab_exact(1, Rational(0)).both_value_mass() == f10;
  return {worst <= 1e-12 && exact,
          fmt::format("max |f - mass| = {:.3g}; f(1,1) = {}/{}, f(1,0) = {}/{}", worst,
                      f11.numerator(), f11.denominator(), f10.numerator(), f10.denominator())};
}

Outcome oracle_equivalence() {
  bool ok = true;
  for (int l0 = 1; l0 <= 6; ++l0) {
    const auto fig5 = analytics::mix_fig5(l0);
    const auto p1 = analytics::p1_exact(l0);
    for (int r = 0; r < p1.key_count(); ++r)
      for (int c = 0; c < p1.dim(); ++c) ok = ok && fig5.at(r, c) == p1.at(r, c);
    const Rational pre(2, 4 * l0 + 3);
    const int nk = fig5.nokey_index();
    const Rational to_key = fig5.row_sum(nk) - fig5.at(nk, nk);
    ok = ok && to_key == pre * Rational(1, 16) && fig5.at(nk, nk) == pre * Rational(7, 16);
  }
  return {ok, "key block and NoKey-row totals exact for l0 = 1..6"};
}

Outcome entropy_identity() {
  double worst = 0.0;
  for (int l0 = 1; l0 <= 10; ++l0) {
    const double m = 4.0 * l0 + 3.0;
    worst = std::max(worst, std::abs(analytics::mutual_info_of(analytics::p0(l0)) -
                                     (std::log2(m) - (m - 1.0) / m)));
  }
  return {worst <= 1e-12, fmt::format("max deviation = {:.3g}", worst)};
}

Outcome mutual_info_closed_form() {
  double zero_worst = 0.0;
  for (int l0 = 1; l0 <= 200; ++l0) {
    zero_worst = std::max(zero_worst, std::abs(analytics::mutual_info_closed(l0, 0.0) -
                                               std::log2(2.0 * l0 + 1.0)));
  }
  bool ok = zero_worst <= 1e-12;
  std::string detail = fmt::format("eta=0 max deviation {:.3g}", zero_worst);
  for (double eta : {0.0, 0.5, 1.0}) {
    const double dev = analytics::mutual_info_closed(200, eta) - std::log2(400.0);
    ok = ok && std::abs(dev) < 0.02;
    detail += fmt::format("; I(200,{}) - log2(400) = {:+.4f}", eta, dev);
  }
  return {ok, detail};
}

Outcome key_rate_claims() {
  const auto etas = grid(101, 0.0, 1.0);
  double min_kappa = 1e9;
  bool ordered = true;
  for (double eta : etas) {
    for (int l0 : {1, 3, 5}) min_kappa = std::min(min_kappa, analytics::secret_key_rate(l0, eta));
    if (eta == 0.0) continue;
    const double k1 = analytics::secret_key_rate(1, eta);
    const double k3 = analytics::secret_key_rate(3, eta);
    const double k5 = analytics::secret_key_rate(5, eta);
    ordered = ordered && k5 > k3 && k3 > k1 && k1 > analytics::bb84_baseline(eta).kappa;
  }
  return {min_kappa > 0 && ordered,
          fmt::format("min kappa = {:.4f}; ordering {}", min_kappa, ordered ? "holds" : "violated")};
}

Outcome error_asymptote() {
  double worst = 0.0;
  for (double eta : {0.1, 0.5, 1.0}) {
    worst = std::max({worst, std::abs(analytics::error_rate_closed(200, eta) - eta / 4),
                      std::abs(analytics::error_rate_from_distribution(analytics::pab(200, eta)) -
                               eta / 4)});
  }
  const double closed = analytics::error_rate_closed(1, 1.0);
  const double dist = analytics::error_rate_from_distribution(analytics::pab(1, 1.0));
  return {worst < 1e-3,
          fmt::format("max |e - eta/4| at l0=200 = {:.3g}; reported at l0=1, eta=1: closed {:.4f} "
                      "vs distribution {:.4f}",
                      worst, closed, dist)};
}

Outcome monte_carlo_agreement() {
  bool ok = true;
  double worst_cell = 0.0;
  double worst_e = 0.0;
  for (int l0 : {1, 3}) {
    for (double eta : {0.1, 0.5, 1.0}) {
      ProtocolConfig c;
      c.l0 = l0;
      c.eta = eta;
      c.trials = 1000000;
      c.seed = 42;
      const Transcript t = run_session(c);
      const auto counts = key_round_counts(t);
      const auto ref = analytics::pab(l0, eta);
      const double n = counts.total();
      for (int r = 0; r < ref.dim(); ++r) {
        for (int col = 0; col < ref.dim(); ++col) {
          const double p = ref.at(r, col);
          const double x = counts.at(r, col) / n;
          if (p == 0.0) {
            ok = ok && x == 0.0;
            continue;
          }
          const double z = std::abs(x - p) / std::sqrt(p * (1 - p) / n);
          worst_cell = std::max(worst_cell, z);
        }
      }
      const ErrorEstimate e = estimate_error(t);
      const double e_ref = analytics::error_rate_from_distribution(ref);
      const double se = std::sqrt(e_ref * (1 - e_ref) / static_cast<double>(e.n_disclosed));
      worst_e = std::max(worst_e, std::abs(e.e_hat - e_ref) / se);
    }
  }
  ok = ok && worst_cell <= 5.0 && worst_e <= 5.0;
  return {ok, fmt::format("max cell |z| = {:.2f}; max e_hat |z| = {:.2f}", worst_cell, worst_e)};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[entry.path().filename().string()] = ss.str();
  }
  return files;
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "hyperqkd_acceptance_determinism";
  std::vector<harness::RunSpec> specs;
  for (SourceModel m : {SourceModel::PaperIdeal, SourceModel::Physical}) {
    harness::RunSpec s;
    s.command = harness::Command::Simulate;
    s.config.trials = 50000;
    s.config.source_model = m;
    s.l0_list = {1, 3};
    s.eta_grid = {0.0, 0.5, 1.0};
    s.output_path = dir.string();
    specs.push_back(s);
  }
  harness::RunSpec cmp = specs[0];
  cmp.command = harness::Command::Compare;
  specs.push_back(cmp);
  harness::RunSpec bell = specs[1];
  bell.command = harness::Command::Bell;
  bell.config.bell_fraction = 0.5;
  specs.push_back(bell);

  std::size_t compared = 0;
  for (harness::RunSpec& spec : specs) {
    std::map<std::string, std::string> runs[2];
    for (auto& run : runs) {
      fs::remove_all(dir);
      std::ostringstream out;
      std::ostringstream err;
      // Runs differ only in thread count.
      spec.workers = &run == &runs[0] ? 1 : 0;
      if (harness::execute(spec, out, err) != 0) return {false, "run failed: " + err.str()};
      run = snapshot(dir);
    }
    if (runs[0] != runs[1]) return {false, fmt::format("{} output differs", harness::to_string(spec.command))};
    compared += runs[0].size();
  }
  fs::remove_all(dir);
  return {true, fmt::format("{} report and transcript files byte-identical across repeat runs", compared)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  const std::vector<Criterion> criteria = {
      {1, "coincidence law", coincidence_law},
      {2, "CHSH value and product-state bound", chsh},
      {3, "collapse rule negativities", collapse_rule},
      {4, "erasure restores the spin singlet", erasure_fidelity},
      {5, "visibility bound under attack", visibility_bound},
      {6, "key fraction", key_fraction},
      {7, "enumeration oracle equivalence", oracle_equivalence},
      {8, "undisturbed entropy identity", entropy_identity},
      {9, "mutual information closed form", mutual_info_closed_form},
      {10, "secret key rate claims", key_rate_claims},
      {11, "error-rate asymptote", error_asymptote},
      {12, "Monte Carlo agreement", monte_carlo_agreement},
      {13, "determinism", determinism},
  };
  int failures = 0;
  std::size_t ran = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.contains(c.id)) continue;
    ++ran;
    Outcome o{false, ""};
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << fmt::format("[{}] {:2d} {}: {}", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail)
              << std::endl;
  }
  std::cout << fmt::format("{}/{} criteria passed", ran - failures, ran)
            << std::endl;
  return failures;
}
