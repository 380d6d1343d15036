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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hyperqkd/errors.hpp"
#include "hyperqkd/two_photon_state.hpp"

namespace hyperqkd {
namespace {

using C = std::complex<double>;

// Circular-basis amplitude of (|HV> - |VH>)/sqrt2, built from explicit
// overlaps <s|H> and <s|V> instead of the library's component helpers.
C linear_singlet_overlap(int s_a, int s_b) {
  const double r = 1.0 / std::sqrt(2.0);
  auto h = [&](int) { return C(r, 0.0); };
  auto v = [&](int s) { return s > 0 ? C(0.0, r) : C(0.0, -r); };
  return (h(s_a) * v(s_b) - v(s_a) * h(s_b)) / std::sqrt(2.0);
}

TEST(TwoPhotonState, NormalizedPrunesAndRescales) {
  TwoPhotonState::Terms t;
  t[{{0, 1}, {0, -1}}] = 3.0;
  t[{{0, -1}, {0, 1}}] = C(0.0, 4.0);
  t[{{1, 1}, {-1, 1}}] = 1e-17;
  const auto s = TwoPhotonState::normalized(1, t);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitude({{0, 1}, {0, -1}})), 0.6, 1e-15);
}

TEST(TwoPhotonState, RejectsInvalidInput) {
  EXPECT_THROW(TwoPhotonState::normalized(1, {}), std::invalid_argument);
  TwoPhotonState::Terms bad_spin;
  bad_spin[{{0, 0}, {0, 1}}] = 1.0;
  EXPECT_THROW(TwoPhotonState::normalized(1, bad_spin), std::invalid_argument);
  TwoPhotonState::Terms bad_l;
  bad_l[{{4, 1}, {0, 1}}] = 1.0;
  EXPECT_THROW(TwoPhotonState::normalized(1, bad_l), std::out_of_range);
  EXPECT_THROW(make_source_state(-1), std::invalid_argument);
}

TEST(TwoPhotonState, SourceMatchesLinearBasisExpansion) {
  for (int l0 = 0; l0 <= 4; ++l0) {
    const auto src = make_source_state(l0);
    const double n = 2 * l0 + 1;
    EXPECT_EQ(src.size(), static_cast<std::size_t>(2 * (2 * l0 + 1)));
    for (int l = -l0; l <= l0; ++l) {
      for (int sa : {1, -1}) {
        for (int sb : {1, -1}) {
          const C expected = linear_singlet_overlap(sa, sb) / std::sqrt(n);
          EXPECT_NEAR(std::abs(src.amplitude({{l, sa}, {-l, sb}}) - expected), 0.0, 1e-15);
        }
      }
      EXPECT_NEAR(std::norm(src.amplitude({{l, 1}, {-l, -1}})), 1.0 / (2 * n), 1e-15);
    }
  }
}

TEST(TwoPhotonState, BornDistributions) {
  const auto src = make_source_state(1);
  const auto oam = born_distribution(src, Party::A, Observable::OAM);
  ASSERT_EQ(oam.size(), 3u);
  for (const auto& [l, p] : oam) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15) << l;
  const auto tam = born_distribution(src, Party::B, Observable::TAM);
  const std::map<int, double> expected{{-2, 1.0 / 6}, {-1, 1.0 / 6}, {0, 1.0 / 3},
                                       {1, 1.0 / 6}, {2, 1.0 / 6}};
  ASSERT_EQ(tam.size(), expected.size());
  for (const auto& [j, p] : expected) EXPECT_NEAR(tam.at(j), p, 1e-15) << j;
}

TEST(TwoPhotonState, ProjectOntoZeroProbabilityThrows) {
  const auto src = make_source_state(1);
  EXPECT_THROW(project_onto(src, Party::A, Observable::OAM, 2), std::invalid_argument);
}

TEST(TwoPhotonState, AnticorrelationHoldsForEveryOutcome) {
  for (int l0 = 1; l0 <= 5; ++l0) {
    const auto src = make_source_state(l0);
    for (Observable o : {Observable::OAM, Observable::TAM}) {
      for (const auto& [v, p] : born_distribution(src, Party::A, o)) {
        const auto m = project_onto(src, Party::A, o, v);
        EXPECT_NEAR(m.probability, p, 1e-15);
        const auto bob = born_distribution(m.collapsed, Party::B, o);
        ASSERT_EQ(bob.size(), 1u) << "l0=" << l0 << " v=" << v;
        EXPECT_EQ(bob.begin()->first, -v);
      }
    }
  }
}

TEST(TwoPhotonState, ProjectMeasureFollowsInverseCdf) {
  const auto src = make_source_state(1);
  EXPECT_EQ(project_measure(src, Party::A, Observable::TAM, 0.0).eigenvalue, -2);
  EXPECT_EQ(project_measure(src, Party::A, Observable::TAM, 0.2).eigenvalue, -1);
  EXPECT_EQ(project_measure(src, Party::A, Observable::TAM, 0.5).eigenvalue, 0);
  EXPECT_EQ(project_measure(src, Party::A, Observable::TAM, 0.99).eigenvalue, 2);
}

TEST(TwoPhotonState, BornConsistencyAtHundredThousandDraws) {
  const auto src = make_source_state(2);
  const auto dist = born_distribution(src, Party::A, Observable::TAM);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 100000;
  std::map<int, int> counts;
  for (int i = 0; i < n; ++i) ++counts[project_measure(src, Party::A, Observable::TAM, u(rng)).eigenvalue];
  for (const auto& [j, p] : dist) {
    const double se = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(static_cast<double>(counts[j]) / n, p, 5 * se) << j;
  }
}

TEST(TwoPhotonState, OperationsPreserveNorm) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int l0 = 1 + trial % 4;
    auto state = make_source_state(l0);
    const Party first = trial % 2 ? Party::A : Party::B;
    const Observable o = u(rng) < 0.5 ? Observable::OAM : Observable::TAM;
    auto m = project_measure(state, first, o, u(rng));
    EXPECT_NEAR(m.collapsed.norm_squared(), 1.0, 1e-12);
    auto m2 = project_measure(m.collapsed, other(first), other(o), u(rng));
    EXPECT_NEAR(m2.collapsed.norm_squared(), 1.0, 1e-12);
    EXPECT_NEAR(spin_flip(m2.collapsed, first).norm_squared(), 1.0, 1e-12);
  }
}

TEST(TwoPhotonState, EraseOamAndSpinFlip) {
  const auto src = make_source_state(2);
  const auto a = project_onto(src, Party::A, Observable::TAM, 1);
  const auto b = project_onto(a.collapsed, Party::B, Observable::TAM, -1);
  const auto erased = erase_oam(erase_oam(b.collapsed, Party::A), Party::B);
  EXPECT_NEAR(fidelity(erased, spin_singlet(2)), 1.0, 1e-12);
  EXPECT_THROW(erase_oam(src, Party::A), AmbiguousErasure);

  TwoPhotonState::Terms t;
  t[{{1, 1}, {-1, -1}}] = 1.0;
  const auto flipped = spin_flip(TwoPhotonState::normalized(1, t), Party::B);
  EXPECT_NEAR(std::abs(flipped.amplitude({{1, 1}, {-1, 1}})), 1.0, 1e-15);
}

TEST(TwoPhotonState, InnerProductAndFidelity) {
  const auto s = spin_singlet(1);
  EXPECT_NEAR(std::abs(inner_product(s, s) - C(1.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(fidelity(s, spin_singlet(1, 1, -1)), 0.0, 1e-15);
}

}  // namespace
}  // namespace hyperqkd
