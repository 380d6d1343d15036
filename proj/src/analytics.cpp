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

#include "hyperqkd/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hyperqkd/errors.hpp"

namespace hyperqkd::analytics {
namespace {

void require_l0(int l0) {
  if (l0 < 1) throw std::invalid_argument("analytics require l0 >= 1, got " + std::to_string(l0));
}

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
}

void require_eta(const Rational& eta) {
  if (eta < 0 || eta > 1) throw std::invalid_argument("eta must lie in [0, 1]");
}

// c log2(x), with the coefficient-zero term defined as 0.
double clog2(double c, double x) { return c == 0.0 ? 0.0 : c * std::log2(x); }

// Weight of Alice's raw value `v` within the variable's range.
Rational alice_value_weight(int l0, Observable o, int v) {
  if (o == Observable::OAM) return Rational(1, 2 * l0 + 1);
  if (std::abs(v) == l0 + 1) return Rational(1, 2 * (2 * l0 + 2));
  return Rational(1, 2 * l0 + 2);
}

int range_edge(int l0, Observable o) { return o == Observable::OAM ? l0 : l0 + 1; }

}  // namespace

double epsilon_bias(int l0) { return to_double(epsilon_bias_exact(l0)); }

Rational epsilon_bias_exact(int l0) {
  require_l0(l0);
  return Rational(1, 2 * (4 * l0 + 3));
}

Rational variable_weight_exact(int l0, Observable o) {
  const Rational half(1, 2);
  return o == Observable::OAM ? half - epsilon_bias_exact(l0) : half + epsilon_bias_exact(l0);
}

ExactDistribution p0_exact(int l0) {
  require_l0(l0);
  ExactDistribution p(l0, true);
  for (int k = 0; k < p.key_count(); ++k) p.at(k, k) = Rational(2, 4 * l0 + 3);
  p.at(p.nokey_index(), p.nokey_index()) = Rational(1, 4 * l0 + 3);
  return p;
}

JointDistribution p0(int l0) { return to_double(p0_exact(l0)); }

ExactDistribution p1_exact(int l0, NoKeyRow placement) {
  require_l0(l0);
  ExactDistribution p(l0, true);
  const Rational prefactor(2, 4 * l0 + 3);
  const int nokey = p.nokey_index();
  for (int k = -l0; k <= l0; ++k) {
    const int row = k + l0;
    p.at(row, row) += prefactor * Rational(3, 4);
    for (int shift : {-2, 2}) {
      const int target = k + shift;
      const int col = std::abs(target) <= l0 ? target + l0 : nokey;
      p.at(row, col) += prefactor * Rational(1, 8);
    }
  }
  if (placement == NoKeyRow::Split) {
    p.at(nokey, -(l0 - 1) + l0) += prefactor * Rational(1, 32);
    p.at(nokey, (l0 - 1) + l0) += prefactor * Rational(1, 32);
  } else {
    p.at(nokey, (l0 - 1) + l0) += prefactor * Rational(1, 16);
  }
  p.at(nokey, nokey) += prefactor * Rational(7, 16);
  return p;
}

JointDistribution p1(int l0, NoKeyRow placement) { return to_double(p1_exact(l0, placement)); }

ExactDistribution enumerate_fig5(int l0, Observable alice_variable) {
  require_l0(l0);
  ExactDistribution table(l0, true);
  const Rational half(1, 2);
  const int edge = range_edge(l0, alice_variable);
  for (int a = -edge; a <= edge; ++a) {
    const Rational w = alice_value_weight(l0, alice_variable, a);
    const int row = table.index(KeySymbol::from_raw(a, l0));
    // Eve measures the same variable: Bob reproduces Alice's value.
    table.at(row, table.index(KeySymbol::from_raw(a, l0))) += w * half;
    // Eve measures the other variable: two independent +-1 steps.
    for (int eve_step : {-1, 1}) {
      for (int bob_step : {-1, 1}) {
        const int bob = a + eve_step + bob_step;
        table.at(row, table.index(KeySymbol::from_raw(bob, l0))) += w * half * half * half;
      }
    }
  }
  return table;
}

ExactDistribution mix_fig5(int l0) {
  const ExactDistribution oam = enumerate_fig5(l0, Observable::OAM);
  const ExactDistribution tam = enumerate_fig5(l0, Observable::TAM);
  const Rational w_oam = variable_weight_exact(l0, Observable::OAM);
  const Rational w_tam = variable_weight_exact(l0, Observable::TAM);
  ExactDistribution out(l0, true);
  for (int r = 0; r < out.dim(); ++r)
    for (int c = 0; c < out.dim(); ++c) out.at(r, c) = w_oam * oam.at(r, c) + w_tam * tam.at(r, c);
  return out;
}

ExactDistribution pab_exact(int l0, const Rational& eta) {
  require_eta(eta);
  const ExactDistribution a = p0_exact(l0);
  const ExactDistribution b = p1_exact(l0);
  ExactDistribution out(l0, true);
  for (int r = 0; r < out.dim(); ++r)
    for (int c = 0; c < out.dim(); ++c) out.at(r, c) = (1 - eta) * a.at(r, c) + eta * b.at(r, c);
  return out;
}

JointDistribution pab(int l0, double eta) {
  require_eta(eta);
  const JointDistribution a = p0(l0);
  const JointDistribution b = p1(l0);
  JointDistribution out(l0, true);
  for (int r = 0; r < out.dim(); ++r)
    for (int c = 0; c < out.dim(); ++c) out.at(r, c) = (1 - eta) * a.at(r, c) + eta * b.at(r, c);
  return out;
}

double key_fraction_closed(int l0, double eta) {
  require_l0(l0);
  require_eta(eta);
  return (4.0 * l0 + 2.0 - eta) / (4.0 * l0 + 3.0);
}

Rational key_fraction_closed_exact(int l0, const Rational& eta) {
  require_l0(l0);
  require_eta(eta);
  return (Rational(4 * l0 + 2) - eta) / Rational(4 * l0 + 3);
}

double error_rate_closed(int l0, double eta) {
  require_l0(l0);
  require_eta(eta);
  return (eta / 8.0) * (4.0 * l0 + 1.0) / ((2.0 * l0 + 1.0) - eta / 8.0);
}

double error_rate_from_distribution(const JointDistribution& p) {
  double both = 0.0;
  double mismatch = 0.0;
  for (int r = 0; r < p.key_count(); ++r) {
    for (int c = 0; c < p.key_count(); ++c) {
      both += p.at(r, c);
      if (r != c) mismatch += p.at(r, c);
    }
  }
  if (both < 1e-15) throw ZeroDenominator("error_rate_from_distribution: no both-key mass");
  return mismatch / both;
}

JointDistribution pk(int l0, double eta) {
  const JointDistribution full = pab(l0, eta);
  const double f = full.both_value_mass();
  JointDistribution out(l0, false);
  for (int r = 0; r < out.dim(); ++r)
    for (int c = 0; c < out.dim(); ++c) out.at(r, c) = full.at(r, c) / f;
  return out;
}

double mutual_info_closed(int l0, double eta) {
  require_l0(l0);
  require_eta(eta);
  const double n = 2.0 * l0 + 1.0;
  const double braces = clog2(n - eta / 2.0, (4.0 * l0 + 2.0 - eta) / 2.0) -
                        clog2(8.0 * (1.0 - eta / 8.0), 1.0 - eta / 8.0) +
                        clog2(n * (1.0 - eta / 4.0), 1.0 - eta / 4.0) +
                        clog2(eta / 4.0 * (2.0 * l0 - 1.0), eta / 8.0);
  return 2.0 / (4.0 * l0 + 2.0 - eta) * braces;
}

double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

double mutual_info_of(const JointDistribution& p) {
  std::vector<double> rows(static_cast<std::size_t>(p.dim()));
  std::vector<double> cols(static_cast<std::size_t>(p.dim()));
  for (int i = 0; i < p.dim(); ++i) {
    rows[static_cast<std::size_t>(i)] = p.row_sum(i);
    cols[static_cast<std::size_t>(i)] = p.col_sum(i);
  }
  return entropy_bits(rows) + entropy_bits(cols) - entropy_bits(p.cells());
}

double undisturbed_entropy(int l0) {
  require_l0(l0);
  const double m = 4.0 * l0 + 3.0;
  return std::log2(m) - (m - 1.0) / m;
}

double eve_information(int l0, double eta) {
  require_l0(l0);
  require_eta(eta);
  return eta / 2.0 * std::log2(2.0 * l0 + 1.0);
}

double secret_key_rate(int l0, double eta) {
  return std::max(mutual_info_closed(l0, eta) - eve_information(l0, eta), 0.0);
}

Bb84Point bb84_baseline(double eta) {
  require_eta(eta);
  const double e = eta / 4.0;
  const double mutual = 1.0 + clog2(e, e) + clog2(1.0 - e, 1.0 - e);
  const double eve = eta / 2.0;
  return {e, mutual, eve, std::max(mutual - eve, 0.0)};
}

double competing_oam_error(int l0, double eta) {
  require_l0(l0);
  require_eta(eta);
  return eta * l0 / (2.0 * l0 + 1.0);
}

RatePoint rate_point(int l0, double eta) {
  const double mutual = mutual_info_closed(l0, eta);
  const double eve = eve_information(l0, eta);
  return {l0,
          eta,
          error_rate_closed(l0, eta),
          error_rate_from_distribution(pab(l0, eta)),
          key_fraction_closed(l0, eta),
          mutual,
          eve,
          std::max(mutual - eve, 0.0),
          undisturbed_entropy(l0)};
}

}  // namespace hyperqkd::analytics
