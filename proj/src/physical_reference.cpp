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

#include "hyperqkd/physical_reference.hpp"

#include <optional>

#include "hyperqkd/analytics.hpp"
#include "hyperqkd/two_photon_state.hpp"

namespace hyperqkd {
namespace {

// Calls visit(eigenvalue, probability, collapsed) for every outcome.
template <class Visit>
void for_each_outcome(const TwoPhotonState& state, Party party, Observable o, Visit&& visit) {
  for (const auto& [value, p] : born_distribution(state, party, o)) {
    if (p <= 0.0) continue;
    visit(value, p, project_onto(state, party, o, value).collapsed);
  }
}

}  // namespace

JointDistribution physical_joint_distribution(int l0, double eta, double epsilon) {
  const TwoPhotonState source = make_source_state(l0);
  JointDistribution table(l0, true);
  const double p_oam = 0.5 - epsilon;
  const double sift = p_oam * p_oam + (1 - p_oam) * (1 - p_oam);

  for (Observable var : {Observable::OAM, Observable::TAM}) {
    const double p_var = var == Observable::OAM ? p_oam : 1 - p_oam;
    const double w_var = p_var * p_var / sift;
    const std::pair<std::optional<Observable>, double> eve_branches[] = {
        {std::nullopt, 1 - eta}, {Observable::OAM, eta / 2}, {Observable::TAM, eta / 2}};
    for (const auto& [eve, w_eve] : eve_branches) {
      if (w_eve == 0.0) continue;
      for_each_outcome(source, Party::A, var, [&](int alice, double pa, const TwoPhotonState& s1) {
        auto bob_step = [&](double w, const TwoPhotonState& s2) {
          for_each_outcome(s2, Party::B, var, [&](int bob, double pb, const TwoPhotonState&) {
            table.at(KeySymbol::from_raw(alice, l0), KeySymbol::from_raw(-bob, l0)) +=
                w_var * w_eve * w * pb;
          });
        };
        if (eve) {
          for_each_outcome(s1, Party::B, *eve, [&](int, double pe, const TwoPhotonState& s2) {
            bob_step(pa * pe, s2);
          });
        } else {
          bob_step(pa, s1);
        }
      });
    }
  }
  return table;
}

JointDistribution physical_joint_distribution(int l0, double eta) {
  return physical_joint_distribution(l0, eta, analytics::epsilon_bias(l0));
}

}  // namespace hyperqkd
