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

#include "hyperqkd/two_photon_state.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "hyperqkd/errors.hpp"

namespace hyperqkd {
namespace {

constexpr Amplitude kI{0.0, 1.0};

// |H> = (|R> + |L>)/sqrt2, |V> = i(|R> - |L>)/sqrt2.
Amplitude h_component(int /*s*/) { return {std::numbers::sqrt2 / 2, 0.0}; }
Amplitude v_component(int s) { return kI * (std::numbers::sqrt2 / 2) * (s > 0 ? 1.0 : -1.0); }

// Spin part of |H>_A|V>_B - |V>_A|H>_B in the circular basis.
Amplitude singlet_component(int s_a, int s_b) {
  return h_component(s_a) * v_component(s_b) - v_component(s_a) * h_component(s_b);
}

void check_mode(int l0, const ModeLabel& m) {
  if (m.s != 1 && m.s != -1) {
    throw std::invalid_argument("spin must be +1 or -1, got " + std::to_string(m.s));
  }
  if (std::abs(m.l) > l0 + 2) {
    throw std::out_of_range("OAM label " + std::to_string(m.l) + " outside cap |l| <= " +
                            std::to_string(l0 + 2));
  }
}

template <class Relabel>
TwoPhotonState relabel(const TwoPhotonState& state, Relabel f) {
  TwoPhotonState::Terms out;
  for (const auto& [key, amp] : state.terms()) out[f(key)] += amp;
  return TwoPhotonState::normalized(state.l0(), std::move(out));
}

}  // namespace

TwoPhotonState TwoPhotonState::normalized(int l0, Terms terms) {
  if (l0 < 0) throw std::invalid_argument("l0 must be nonnegative");
  double total = 0.0;
  for (auto it = terms.begin(); it != terms.end();) {
    check_mode(l0, it->first.a);
    check_mode(l0, it->first.b);
    if (std::abs(it->second) < kPruneMagnitude) {
      it = terms.erase(it);
    } else {
      total += std::norm(it->second);
      ++it;
    }
  }
  if (total <= 0.0) throw std::invalid_argument("cannot normalize a zero state");
  const double scale = 1.0 / std::sqrt(total);
  for (auto& [key, amp] : terms) amp *= scale;
  return TwoPhotonState(l0, std::move(terms));
}

Amplitude TwoPhotonState::amplitude(const ModePair& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Amplitude{} : it->second;
}

double TwoPhotonState::norm_squared() const {
  double total = 0.0;
  for (const auto& [key, amp] : terms_) total += std::norm(amp);
  return total;
}

Amplitude inner_product(const TwoPhotonState& lhs, const TwoPhotonState& rhs) {
  Amplitude sum{};
  for (const auto& [key, amp] : lhs.terms()) sum += std::conj(amp) * rhs.amplitude(key);
  return sum;
}

double fidelity(const TwoPhotonState& lhs, const TwoPhotonState& rhs) {
  return std::norm(inner_product(lhs, rhs));
}

TwoPhotonState make_source_state(int l0) {
  if (l0 < 0) throw std::invalid_argument("make_source_state: l0 must be >= 0");
  TwoPhotonState::Terms terms;
  for (int l = -l0; l <= l0; ++l) {
    for (int s_a : {1, -1}) {
      for (int s_b : {1, -1}) {
        terms[{{l, s_a}, {-l, s_b}}] = singlet_component(s_a, s_b);
      }
    }
  }
  return TwoPhotonState::normalized(l0, std::move(terms));
}

TwoPhotonState spin_singlet(int l0, int l_a, int l_b) {
  TwoPhotonState::Terms terms;
  for (int s_a : {1, -1}) {
    for (int s_b : {1, -1}) terms[{{l_a, s_a}, {l_b, s_b}}] = singlet_component(s_a, s_b);
  }
  return TwoPhotonState::normalized(l0, std::move(terms));
}

std::map<int, double> born_distribution(const TwoPhotonState& state, Party party,
                                        Observable observable) {
  std::map<int, double> dist;
  for (const auto& [key, amp] : state.terms()) {
    dist[key.of(party).eigenvalue(observable)] += std::norm(amp);
  }
  return dist;
}

Measurement project_onto(const TwoPhotonState& state, Party party, Observable observable,
                         int eigenvalue) {
  TwoPhotonState::Terms kept;
  double probability = 0.0;
  for (const auto& [key, amp] : state.terms()) {
    if (key.of(party).eigenvalue(observable) == eigenvalue) {
      kept.emplace(key, amp);
      probability += std::norm(amp);
    }
  }
  if (kept.empty()) {
    throw std::invalid_argument("projection onto " + std::string(to_string(observable)) + " = " +
                                std::to_string(eigenvalue) + " has zero probability");
  }
  return {eigenvalue, TwoPhotonState::normalized(state.l0(), std::move(kept)), probability};
}

Measurement project_measure(const TwoPhotonState& state, Party party, Observable observable,
                            double draw) {
  const auto dist = born_distribution(state, party, observable);
  assert(!dist.empty());
  double cumulative = 0.0;
  int outcome = dist.rbegin()->first;
  for (const auto& [value, p] : dist) {
    cumulative += p;
    if (draw < cumulative) {
      outcome = value;
      break;
    }
  }
  return project_onto(state, party, observable, outcome);
}

TwoPhotonState erase_oam(const TwoPhotonState& state, Party party) {
  std::set<int> l_for_spin[2];
  for (const auto& [key, amp] : state.terms()) {
    const ModeLabel& m = key.of(party);
    auto& seen = l_for_spin[m.s > 0 ? 0 : 1];
    seen.insert(m.l);
    if (seen.size() > 1) {
      throw AmbiguousErasure("erase_oam: spin " + std::to_string(m.s) +
                             " carries more than one OAM value on photon " +
                             (party == Party::A ? "A" : "B"));
    }
  }
  return relabel(state, [party](ModePair key) {
    key.of(party).l = 0;
    return key;
  });
}

TwoPhotonState spin_flip(const TwoPhotonState& state, Party party) {
  return relabel(state, [party](ModePair key) {
    key.of(party).s = -key.of(party).s;
    return key;
  });
}

}  // namespace hyperqkd
