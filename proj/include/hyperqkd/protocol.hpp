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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hyperqkd/counter_rng.hpp"
#include "hyperqkd/key_table.hpp"
#include "hyperqkd/modes.hpp"
#include "hyperqkd/spin_density.hpp"
#include "hyperqkd/two_photon_state.hpp"

namespace hyperqkd {

enum class SourceModel : std::uint8_t {
  /// Full state-vector pipeline: projective sorting, erasure, spin densities.
  Physical,
  /// Direct sampler of the eavesdropper branching model with flattened
  /// per-value probabilities.
  PaperIdeal,
};

enum class Role : std::uint8_t { KeyRound, BellRound, Discarded };

/// Polarizer settings used on Bell rounds. Each Bell round picks, with
/// probability 1/2 each, one of the four CHSH pairs or one bin of a phi
/// sweep at fixed theta.
struct BellSettings {
  ChshAngles chsh;
  PolarizationAngle sweep_theta{std::numbers::pi / 4};
  int sweep_bins = 36;

  /// (alice, bob) polarizer angles of CHSH pair 0..3:
  /// (a,b), (a,b'), (a',b), (a',b').
  std::pair<PolarizationAngle, PolarizationAngle> chsh_pair(int index) const;
  PolarizationAngle sweep_phi(int bin) const;
};

struct ProtocolConfig {
  int l0 = 1;
  double eta = 0.0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  SourceModel source_model = SourceModel::PaperIdeal;
  double bell_fraction = 0.1;
  double disclose_fraction = 0.1;
  std::optional<double> epsilon_override;
  BellSettings bell;

  /// Throws std::invalid_argument on l0 < 1, trials == 0, fractions outside
  /// [0, 1] or epsilon outside [0, 1/2).
  void validate() const;
  /// epsilon_override, or the equalizing bias for l0.
  double epsilon() const;
};

enum class BellKind : std::uint8_t { Chsh, Sweep };

struct BellObservation {
  BellKind kind = BellKind::Chsh;
  int setting = 0;  // CHSH pair 0..3 or sweep bin
  int alice_outcome = 1;
  int bob_outcome = 1;

  friend bool operator==(const BellObservation&, const BellObservation&) = default;
};

/// One protocol round.
struct TrialRecord {
  std::uint64_t trial_index = 0;
  Observable alice_var = Observable::OAM;
  Observable bob_var = Observable::OAM;
  std::optional<Observable> eve_var;
  std::optional<int> alice_raw;
  std::optional<int> bob_raw;
  std::optional<int> eve_raw;
  bool sifted = false;
  Role role = Role::Discarded;
  /// Alice's key is her own value; Bob's key is the negation of his.
  KeySymbol alice_key = KeySymbol::none();
  KeySymbol bob_key = KeySymbol::none();
  bool disclosed = false;
  std::optional<BellObservation> bell;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct TranscriptSummary {
  std::uint64_t trials = 0;
  std::uint64_t sifted = 0;
  std::uint64_t key_rounds = 0;
  std::uint64_t bell_rounds = 0;
  std::uint64_t discarded = 0;
  std::uint64_t both_key = 0;
  std::uint64_t nokey = 0;
  std::uint64_t disclosed = 0;
  std::uint64_t disclosed_both_key = 0;
  std::uint64_t disclosed_errors = 0;

  friend bool operator==(const TranscriptSummary&, const TranscriptSummary&) = default;
};

struct Transcript {
  ProtocolConfig config;
  std::vector<TrialRecord> records;
  TranscriptSummary summary;
};

TranscriptSummary tally(std::span<const TrialRecord> records);

/// OAM when draw < 1/2 - epsilon, TAM otherwise.
Observable choose_variable(double draw, double epsilon);

/// Forced choices for one state-vector round; used by run_trial_physical
/// and directly by tests that need a specific branch.
struct PhysicalRound {
  Observable alice;
  Observable bob;
  std::optional<Observable> eve;
  double alice_draw = 0.0;
  double eve_draw = 0.0;
  double bob_draw = 0.0;
};

struct PhysicalOutcome {
  int alice_raw;
  int bob_raw;
  std::optional<int> eve_raw;
  /// State after all measurements and the parties' erasures.
  TwoPhotonState final_state;
};

/// Alice sorts photon A, Eve (if present) sorts photon B and forwards it,
/// Bob sorts photon B; then each party erases the unmeasured information:
/// erase_oam after a TAM sort, spin_flip after an OAM sort.
PhysicalOutcome play_physical_round(const TwoPhotonState& source, const PhysicalRound& round);

TrialRecord run_trial_physical(const ProtocolConfig& config, const TwoPhotonState& source,
                               std::uint64_t trial_index);
TrialRecord run_trial_physical(const ProtocolConfig& config, std::uint64_t trial_index);

TrialRecord run_trial_paper_ideal(const ProtocolConfig& config, std::uint64_t trial_index);

/// Runs config.trials rounds on `workers` threads (0 = hardware
/// concurrency). The transcript does not depend on the worker count.
Transcript run_session(const ProtocolConfig& config, unsigned workers = 0);

struct ErrorEstimate {
  double e_hat;
  std::uint64_t n_disclosed;
  std::uint64_t errors;
  double std_error;
};

/// Mismatch rate over disclosed key rounds where both parties hold a key
/// value. Throws NoKeyRounds when there are none.
ErrorEstimate estimate_error(const Transcript& transcript);

/// Counts of (alice_key, bob_key) over key rounds.
KeyTable<double> key_round_counts(const Transcript& transcript);

/// key_round_counts normalized to a distribution.
JointDistribution empirical_joint(const Transcript& transcript);

struct BellResult {
  double s_hat = 0.0;
  double s_std_error = 0.0;
  std::array<double, 4> e_hat{};
  double v_hat = 0.0;
  double v_std_error = 0.0;
  std::uint64_t chsh_rounds = 0;
  std::uint64_t sweep_rounds = 0;
  /// Visibility restricted to rounds where Eve sorted the other variable.
  std::optional<double> v_mismatched;
  std::optional<double> v_mismatched_std_error;

  std::uint64_t counted_rounds() const { return chsh_rounds + sweep_rounds; }
};

inline constexpr std::uint64_t kMinBellRounds = 1000;

/// Whether a Bell round's own sorting outcome leaves the spin undetermined
/// (an OAM sort, or a TAM outcome with two (l, s) combinations).
bool bell_eligible(const TrialRecord& record, int l0);

/// Aggregates Bell rounds into CHSH and visibility estimates.
/// Throws InsufficientBellRounds below kMinBellRounds counted rounds.
BellResult bell_test(const Transcript& transcript);
BellResult bell_test(ProtocolConfig config, const BellSettings& angles, unsigned workers = 0);

}  // namespace hyperqkd
