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

#include "hyperqkd/key_table.hpp"
#include "hyperqkd/modes.hpp"

namespace hyperqkd::analytics {

/// Beam-splitter bias that equalizes per-value OAM and TAM probabilities:
/// 1 / (2 (4 l0 + 3)).
double epsilon_bias(int l0);
Rational epsilon_bias_exact(int l0);

/// Probability that a splitter biased by epsilon_bias(l0) selects `o`.
Rational variable_weight_exact(int l0, Observable o);

/// Undisturbed joint distribution: 2/(4l0+3) on the key diagonal and
/// 1/(4l0+3) on NoKey/NoKey.
ExactDistribution p0_exact(int l0);
JointDistribution p0(int l0);

/// Where the NoKey row's 1/16 mass sits in p1.
enum class NoKeyRow {
  /// 1/32 each at key values -(l0-1) and +(l0-1), as the branching tree gives.
  Split,
  /// All 1/16 in the single column k = l0 - 1, as in the displayed matrix.
  Lumped,
};

/// Joint distribution on trials where the eavesdropper intervenes.
ExactDistribution p1_exact(int l0, NoKeyRow placement = NoKeyRow::Split);
JointDistribution p1(int l0, NoKeyRow placement = NoKeyRow::Split);

/// Exhaustive walk of the eavesdropper branching tree, conditional on Eve
/// intervening and on Alice measuring `alice_variable`. Alice's value is
/// weighted uniformly over the variable's range (the two TAM no-key values
/// at half weight); Eve picks the same or the other variable with
/// probability 1/2; a wrong-variable Eve shifts the value by +-1 and Bob
/// shifts again by +-1, each with probability 1/2.
ExactDistribution enumerate_fig5(int l0, Observable alice_variable);

/// P(OAM) * enumerate_fig5(OAM) + P(TAM) * enumerate_fig5(TAM).
ExactDistribution mix_fig5(int l0);

/// (1 - eta) p0 + eta p1.
ExactDistribution pab_exact(int l0, const Rational& eta);
JointDistribution pab(int l0, double eta);

/// f = (4 l0 + 2 - eta) / (4 l0 + 3).
double key_fraction_closed(int l0, double eta);
Rational key_fraction_closed_exact(int l0, const Rational& eta);

/// e = (eta/8) (4 l0 + 1) / ((2 l0 + 1) - eta/8), the closed form as published.
double error_rate_closed(int l0, double eta);

/// P(keys differ | both parties hold a key value). Throws ZeroDenominator
/// when the both-value mass is below 1e-15.
double error_rate_from_distribution(const JointDistribution& p);

/// Key-generating events only: the key block of pab renormalized by f.
JointDistribution pk(int l0, double eta);

/// Published four-term expression for I(A;B) as a function of (l0, eta).
double mutual_info_closed(int l0, double eta);

/// Shannon mutual information in bits of any probability table.
double mutual_info_of(const JointDistribution& p);

/// Shannon entropy in bits of a probability vector; 0 log 0 = 0.
double entropy_bits(const std::vector<double>& p);

/// log2(4 l0 + 3) - (4 l0 + 2)/(4 l0 + 3).
double undisturbed_entropy(int l0);

/// (eta / 2) log2(2 l0 + 1): full information on the half of the
/// interceptions where Eve picks the right variable.
double eve_information(int l0, double eta);

/// max(I(A;B) - I_E, 0).
double secret_key_rate(int l0, double eta);

struct Bb84Point {
  double e;
  double mutual_info;
  double eve_info;
  double kappa;
};

/// Intercept-resend BB84: e = eta/4, I = 1 - h(e), I_E = eta/2.
Bb84Point bb84_baseline(double eta);

/// Error rate of two-basis OAM schemes, eta l0 / (2 l0 + 1).
double competing_oam_error(int l0, double eta);

struct RatePoint {
  int l0;
  double eta;
  double e;                    // closed form
  double e_from_distribution;  // mismatch given both keys, from pab
  double f;
  double mutual_info;
  double eve_info;
  double kappa;
  double undisturbed_entropy;
};

RatePoint rate_point(int l0, double eta);

}  // namespace hyperqkd::analytics
