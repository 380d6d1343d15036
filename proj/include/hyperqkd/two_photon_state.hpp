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

#include <complex>
#include <cstddef>
#include <map>

#include "hyperqkd/modes.hpp"

namespace hyperqkd {

using Amplitude = std::complex<double>;

/// Pure two-photon state as a sparse map from joint (l, s) labels to
/// amplitudes. Values are immutable: every operation returns a new state.
///
/// Invariants: unit norm to 1e-12, no stored amplitude of magnitude below
/// 1e-15, and every |l| <= l0 + 2.
class TwoPhotonState {
 public:
  using Terms = std::map<ModePair, Amplitude>;

  static constexpr double kPruneMagnitude = 1e-15;
  static constexpr double kNormTolerance = 1e-12;

  /// Rescales `terms` to unit norm and prunes negligible amplitudes.
  /// Throws std::invalid_argument for an all-zero input and
  /// std::out_of_range for labels outside the mode cap.
  static TwoPhotonState normalized(int l0, Terms terms);

  int l0() const { return l0_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  Amplitude amplitude(const ModePair& key) const;
  double norm_squared() const;

 private:
  TwoPhotonState(int l0, Terms terms) : l0_(l0), terms_(std::move(terms)) {}

  int l0_ = 0;
  Terms terms_;
};

/// <lhs|rhs>.
Amplitude inner_product(const TwoPhotonState& lhs, const TwoPhotonState& rhs);

/// |<lhs|rhs>|^2, insensitive to global phase.
double fidelity(const TwoPhotonState& lhs, const TwoPhotonState& rhs);

/// Type-II source: OAM-anticorrelated, polarization singlet, flat over
/// l in [-l0, l0]. Stored in the circular (R/L) spin basis.
TwoPhotonState make_source_state(int l0);

/// The Bell singlet (|H>|V> - |V>|H>)/sqrt(2) attached to fixed OAM labels.
TwoPhotonState spin_singlet(int l0, int l_a = 0, int l_b = 0);

/// Born probabilities of `observable` on one photon, keyed by eigenvalue
/// (ascending).
std::map<int, double> born_distribution(const TwoPhotonState& state, Party party,
                                        Observable observable);

struct Measurement {
  int eigenvalue;
  TwoPhotonState collapsed;
  double probability;
};

/// Samples an outcome by inverse CDF over ascending eigenvalues using `draw`
/// in [0, 1) and returns the renormalized post-measurement state.
Measurement project_measure(const TwoPhotonState& state, Party party, Observable observable,
                            double draw);

/// Projects onto a given eigenvalue. Throws std::invalid_argument when the
/// outcome has zero probability.
Measurement project_onto(const TwoPhotonState& state, Party party, Observable observable,
                         int eigenvalue);

/// Relabels every mode (l, s) of `party` to (0, s). Throws AmbiguousErasure
/// when two distinct l values share a spin on the party's support.
TwoPhotonState erase_oam(const TwoPhotonState& state, Party party);

/// Relabels every mode (l, s) of `party` to (l, -s).
TwoPhotonState spin_flip(const TwoPhotonState& state, Party party);

}  // namespace hyperqkd
