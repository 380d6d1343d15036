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

#include "hyperqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "hyperqkd/analytics.hpp"
#include "hyperqkd/errors.hpp"

namespace hyperqkd {
namespace {

void require_fraction(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

// Alice's raw value in the ideal model: uniform over the
// variable's range, the two TAM no-key values at half weight.
int sample_ideal_value(int l0, Observable o, double u) {
  if (o == Observable::OAM) {
    const int n = 2 * l0 + 1;
    return std::min(static_cast<int>(u * n), n - 1) - l0;
  }
  const double x = u * (2 * l0 + 2);
  if (x < 0.5) return -(l0 + 1);
  if (x >= 0.5 + (2 * l0 + 1)) return l0 + 1;
  return std::min(static_cast<int>(x - 0.5), 2 * l0) - l0;
}

// Samples one of the four polarizer outcomes (++, +-, -+, --).
BellObservation observe_polarization(const SpinDensity& rho, const BellSettings& settings,
                                     const TrialRandom& rng) {
  BellObservation obs;
  const double u = rng.uniform(Draw::BellSetting);
  PolarizationAngle alpha;
  PolarizationAngle beta;
  if (u < 0.5) {
    obs.kind = BellKind::Chsh;
    obs.setting = std::min(static_cast<int>(u * 8), 3);
    std::tie(alpha, beta) = settings.chsh_pair(obs.setting);
  } else {
    obs.kind = BellKind::Sweep;
    obs.setting = std::min(static_cast<int>((u - 0.5) * 2 * settings.sweep_bins),
                           settings.sweep_bins - 1);
    alpha = settings.sweep_theta;
    beta = settings.sweep_phi(obs.setting);
  }
  const std::array<double, 4> p = {
      polarization_coincidence(rho, alpha, beta),
      polarization_coincidence(rho, alpha, beta.perpendicular()),
      polarization_coincidence(rho, alpha.perpendicular(), beta),
      polarization_coincidence(rho, alpha.perpendicular(), beta.perpendicular()),
  };
  const double total = p[0] + p[1] + p[2] + p[3];
  if (total < 1e-12) throw DegenerateCorrelation("Bell round: outcome probabilities vanish");
  const double target = rng.uniform(Draw::BellOutcome) * total;
  double cumulative = 0.0;
  int outcome = 3;
  for (int i = 0; i < 4; ++i) {
    cumulative += p[static_cast<std::size_t>(i)];
    if (target < cumulative) {
      outcome = i;
      break;
    }
  }
  obs.alice_outcome = outcome < 2 ? 1 : -1;
  obs.bob_outcome = outcome % 2 == 0 ? 1 : -1;
  return obs;
}

// Role assignment and key mapping shared by both source models.
void finish_record(TrialRecord& r, const ProtocolConfig& config, const TrialRandom& rng) {
  r.sifted = r.alice_var == r.bob_var;
  if (!r.sifted) {
    r.role = Role::Discarded;
    return;
  }
  if (rng.uniform(Draw::Role) < config.bell_fraction) {
    r.role = Role::BellRound;
    return;
  }
  r.role = Role::KeyRound;
  r.alice_key = KeySymbol::from_raw(*r.alice_raw, config.l0);
  r.bob_key = KeySymbol::from_raw(-*r.bob_raw, config.l0);
  r.disclosed = rng.uniform(Draw::Disclose) < config.disclose_fraction;
}

TrialRecord run_trial(const ProtocolConfig& config, const TwoPhotonState* source,
                      std::uint64_t index) {
  return config.source_model == SourceModel::Physical
             ? run_trial_physical(config, *source, index)
             : run_trial_paper_ideal(config, index);
}

double rate_std_error(double p, double n) { return n > 0 ? std::sqrt(std::max(p * (1 - p), 0.0) / n) : 0.0; }

struct Fringe {
  double v = 0.0;
  double se = 0.0;
  bool ok = false;
};

// Visibility of a binned coincidence histogram, with a delta-method error.
Fringe fringe_visibility(const std::vector<double>& hits, const std::vector<double>& totals) {
  int i_max = -1;
  int i_min = -1;
  double r_max = 0.0;
  double r_min = 0.0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (totals[i] == 0) return {};
    const double r = hits[i] / totals[i];
    if (i_max < 0 || r > r_max) {
      r_max = r;
      i_max = static_cast<int>(i);
    }
    if (i_min < 0 || r < r_min) {
      r_min = r;
      i_min = static_cast<int>(i);
    }
  }
  const double denom = r_max + r_min;
  if (i_max < 0 || denom <= 0.0) return {};
  const double se_max = rate_std_error(r_max, totals[static_cast<std::size_t>(i_max)]);
  const double se_min = rate_std_error(r_min, totals[static_cast<std::size_t>(i_min)]);
  const double d_max = 2 * r_min / (denom * denom);
  const double d_min = 2 * r_max / (denom * denom);
  return {(r_max - r_min) / denom, std::hypot(d_max * se_max, d_min * se_min), true};
}

}  // namespace

std::pair<PolarizationAngle, PolarizationAngle> BellSettings::chsh_pair(int index) const {
  switch (index) {
    case 0: return {chsh.a, chsh.b};
    case 1: return {chsh.a, chsh.b_prime};
    case 2: return {chsh.a_prime, chsh.b};
    case 3: return {chsh.a_prime, chsh.b_prime};
    default: throw std::out_of_range("CHSH pair index must be 0..3");
  }
}

PolarizationAngle BellSettings::sweep_phi(int bin) const {
  return PolarizationAngle(std::numbers::pi * bin / sweep_bins);
}

void ProtocolConfig::validate() const {
  if (l0 < 1) throw std::invalid_argument("l0 must be >= 1");
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  require_fraction(eta, "eta");
  require_fraction(bell_fraction, "bell_fraction");
  require_fraction(disclose_fraction, "disclose_fraction");
  if (epsilon_override && !(*epsilon_override >= 0.0 && *epsilon_override < 0.5)) {
    throw std::invalid_argument("epsilon must lie in [0, 1/2)");
  }
  if (bell.sweep_bins < 2) throw std::invalid_argument("sweep_bins must be >= 2");
}

double ProtocolConfig::epsilon() const {
  return epsilon_override ? *epsilon_override : analytics::epsilon_bias(l0);
}

TranscriptSummary tally(std::span<const TrialRecord> records) {
  TranscriptSummary s;
  s.trials = records.size();
  for (const TrialRecord& r : records) {
    if (r.sifted) ++s.sifted;
    switch (r.role) {
      case Role::Discarded: ++s.discarded; break;
      case Role::BellRound: ++s.bell_rounds; break;
      case Role::KeyRound: {
        ++s.key_rounds;
        const bool both = r.alice_key.is_value() && r.bob_key.is_value();
        if (both) {
          ++s.both_key;
        } else {
          ++s.nokey;
        }
        if (r.disclosed) {
          ++s.disclosed;
          if (both) {
            ++s.disclosed_both_key;
            if (r.alice_key != r.bob_key) ++s.disclosed_errors;
          }
        }
        break;
      }
    }
  }
  return s;
}

Observable choose_variable(double draw, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("choose_variable: epsilon must lie in [0, 1/2)");
  }
  return draw < 0.5 - epsilon ? Observable::OAM : Observable::TAM;
}

PhysicalOutcome play_physical_round(const TwoPhotonState& source, const PhysicalRound& round) {
  Measurement alice = project_measure(source, Party::A, round.alice, round.alice_draw);
  TwoPhotonState state = std::move(alice.collapsed);
  std::optional<int> eve_raw;
  if (round.eve) {
    Measurement eve = project_measure(state, Party::B, *round.eve, round.eve_draw);
    eve_raw = eve.eigenvalue;
    state = std::move(eve.collapsed);
  }
  Measurement bob = project_measure(state, Party::B, round.bob, round.bob_draw);
  state = std::move(bob.collapsed);
  for (auto [party, var] : {std::pair{Party::A, round.alice}, std::pair{Party::B, round.bob}}) {
    try {
      state = var == Observable::TAM ? erase_oam(state, party) : spin_flip(state, party);
    } catch (const AmbiguousErasure& e) {
      throw std::logic_error(std::string("unreachable ambiguous erasure: ") + e.what());
    }
  }
  return {alice.eigenvalue, bob.eigenvalue, eve_raw, std::move(state)};
}

TrialRecord run_trial_physical(const ProtocolConfig& config, const TwoPhotonState& source,
                               std::uint64_t trial_index) {
  const TrialRandom rng(config.seed, trial_index);
  const double epsilon = config.epsilon();
  PhysicalRound round{choose_variable(rng.uniform(Draw::AliceVariable), epsilon),
                      choose_variable(rng.uniform(Draw::BobVariable), epsilon),
                      std::nullopt,
                      rng.uniform(Draw::AliceOutcome),
                      rng.uniform(Draw::EveOutcome),
                      rng.uniform(Draw::BobOutcome)};
  if (rng.uniform(Draw::EveIntercept) < config.eta) {
    round.eve = rng.uniform(Draw::EveVariable) < 0.5 ? Observable::OAM : Observable::TAM;
  }
  PhysicalOutcome outcome = play_physical_round(source, round);

  TrialRecord r;
  r.trial_index = trial_index;
  r.alice_var = round.alice;
  r.bob_var = round.bob;
  r.eve_var = round.eve;
  r.alice_raw = outcome.alice_raw;
  r.bob_raw = outcome.bob_raw;
  r.eve_raw = outcome.eve_raw;
  finish_record(r, config, rng);
  if (r.role == Role::BellRound) {
    r.bell = observe_polarization(spin_density(outcome.final_state), config.bell, rng);
  }
  return r;
}

TrialRecord run_trial_physical(const ProtocolConfig& config, std::uint64_t trial_index) {
  config.validate();
  return run_trial_physical(config, make_source_state(config.l0), trial_index);
}

TrialRecord run_trial_paper_ideal(const ProtocolConfig& config, std::uint64_t trial_index) {
  const TrialRandom rng(config.seed, trial_index);
  const int l0 = config.l0;
  TrialRecord r;
  r.trial_index = trial_index;
  r.alice_var = choose_variable(rng.uniform(Draw::AliceVariable), config.epsilon());
  r.bob_var = rng.uniform(Draw::BobVariable) < 0.5 ? r.alice_var : other(r.alice_var);
  const int alice = sample_ideal_value(l0, r.alice_var, rng.uniform(Draw::AliceOutcome));
  r.alice_raw = alice;

  // Value of photon B in Alice's variable as it reaches Bob.
  int bob = -alice;
  if (rng.uniform(Draw::EveIntercept) < config.eta) {
    const bool same = rng.uniform(Draw::EveVariable) < 0.5;
    r.eve_var = same ? r.alice_var : other(r.alice_var);
    if (same) {
      r.eve_raw = -alice;
    } else {
      const int eve = -alice + (rng.uniform(Draw::EveStep) < 0.5 ? -1 : 1);
      r.eve_raw = eve;
      bob = eve + (rng.uniform(Draw::BobStep) < 0.5 ? -1 : 1);
    }
  }
  // The branching model only describes rounds where Bob sorts Alice's variable.
  if (r.bob_var == r.alice_var) r.bob_raw = bob;
  finish_record(r, config, rng);
  return r;
}

Transcript run_session(const ProtocolConfig& config, unsigned workers) {
  config.validate();
  Transcript t{config, std::vector<TrialRecord>(config.trials), {}};
  std::optional<TwoPhotonState> source;
  if (config.source_model == SourceModel::Physical) source = make_source_state(config.l0);
  const TwoPhotonState* src = source ? &*source : nullptr;

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t n = config.trials;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) t.records[i] = run_trial(config, src, i);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::uint64_t i = n * w / workers; i < n * (w + 1) / workers; ++i) {
              t.records[i] = run_trial(config, src, i);
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  t.summary = tally(t.records);
  return t;
}

ErrorEstimate estimate_error(const Transcript& transcript) {
  const TranscriptSummary s = tally(transcript.records);
  if (s.disclosed_both_key == 0) throw NoKeyRounds("estimate_error: no disclosed key rounds");
  const double n = static_cast<double>(s.disclosed_both_key);
  const double e = static_cast<double>(s.disclosed_errors) / n;
  return {e, s.disclosed_both_key, s.disclosed_errors, rate_std_error(e, n)};
}

KeyTable<double> key_round_counts(const Transcript& transcript) {
  KeyTable<double> counts(transcript.config.l0, true);
  for (const TrialRecord& r : transcript.records) {
    if (r.role == Role::KeyRound) counts.at(r.alice_key, r.bob_key) += 1.0;
  }
  return counts;
}

JointDistribution empirical_joint(const Transcript& transcript) {
  KeyTable<double> counts = key_round_counts(transcript);
  const double total = counts.total();
  if (total == 0) throw NoKeyRounds("empirical_joint: no key rounds");
  JointDistribution p(counts.l0(), true);
  for (int r = 0; r < p.dim(); ++r)
    for (int c = 0; c < p.dim(); ++c) p.at(r, c) = counts.at(r, c) / total;
  return p;
}

bool bell_eligible(const TrialRecord& record, int l0) {
  if (record.role != Role::BellRound || !record.bell) return false;
  if (record.alice_var == Observable::OAM) return true;
  return record.alice_raw && std::abs(*record.alice_raw) <= l0 - 1;
}

BellResult bell_test(const Transcript& transcript) {
  const ProtocolConfig& config = transcript.config;
  if (config.source_model != SourceModel::Physical) {
    throw std::invalid_argument("bell_test needs the physical source model");
  }
  const auto bins = static_cast<std::size_t>(config.bell.sweep_bins);
  std::array<std::array<double, 4>, 4> chsh{};  // [pair][outcome ++,+-,-+,--]
  std::vector<double> hits(bins), totals(bins), hits_mm(bins), totals_mm(bins);
  BellResult result;
  for (const TrialRecord& r : transcript.records) {
    if (!bell_eligible(r, config.l0)) continue;
    const BellObservation& b = *r.bell;
    const auto setting = static_cast<std::size_t>(b.setting);
    if (b.kind == BellKind::Chsh) {
      const int outcome = (b.alice_outcome > 0 ? 0 : 2) + (b.bob_outcome > 0 ? 0 : 1);
      chsh[setting][static_cast<std::size_t>(outcome)] += 1.0;
      ++result.chsh_rounds;
    } else {
      const double coincident = (b.alice_outcome > 0 && b.bob_outcome > 0) ? 1.0 : 0.0;
      hits[setting] += coincident;
      totals[setting] += 1.0;
      if (r.eve_var && *r.eve_var != r.alice_var) {
        hits_mm[setting] += coincident;
        totals_mm[setting] += 1.0;
      }
      ++result.sweep_rounds;
    }
  }
  if (result.counted_rounds() < kMinBellRounds) {
    throw InsufficientBellRounds("bell_test: only " + std::to_string(result.counted_rounds()) +
                                 " eligible Bell rounds");
  }
  double variance = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& c = chsh[i];
    const double n = c[0] + c[1] + c[2] + c[3];
    if (n == 0) throw InsufficientBellRounds("bell_test: a CHSH setting has no rounds");
    const double e = (c[0] + c[3] - c[1] - c[2]) / n;
    result.e_hat[i] = e;
    variance += std::max(1.0 - e * e, 0.0) / n;
  }
  const auto& e = result.e_hat;
  result.s_hat = std::abs(e[0] - e[1] + e[2] + e[3]);
  result.s_std_error = std::sqrt(variance);

  const Fringe all = fringe_visibility(hits, totals);
  if (!all.ok) throw InsufficientBellRounds("bell_test: empty visibility bins");
  result.v_hat = all.v;
  result.v_std_error = all.se;
  const Fringe mm = fringe_visibility(hits_mm, totals_mm);
  if (mm.ok) {
    result.v_mismatched = mm.v;
    result.v_mismatched_std_error = mm.se;
  }
  return result;
}

BellResult bell_test(ProtocolConfig config, const BellSettings& angles, unsigned workers) {
  if (!(config.bell_fraction > 0.0)) throw std::invalid_argument("bell_test: bell_fraction must be > 0");
  if (config.source_model != SourceModel::Physical) {
    throw std::invalid_argument("bell_test needs the physical source model");
  }
  config.bell = angles;
  return bell_test(run_session(config, workers));
}

}  // namespace hyperqkd
