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
#include <numbers>

#include "hyperqkd/errors.hpp"
#include "hyperqkd/spin_density.hpp"

namespace hyperqkd {
namespace {

constexpr double kPi = std::numbers::pi;

SpinDensity product_rl() {
  TwoPhotonState::Terms t;
  t[{{0, 1}, {0, -1}}] = 1.0;
  return spin_density(TwoPhotonState::normalized(0, t));
}

TEST(PolarizationAngle, ReducesModuloPi) {
  EXPECT_NEAR(PolarizationAngle(kPi + 0.25).radians(), 0.25, 1e-15);
  EXPECT_NEAR(PolarizationAngle(-0.25).radians(), kPi - 0.25, 1e-15);
  EXPECT_NEAR(PolarizationAngle(kPi / 4).perpendicular().radians(), 3 * kPi / 4, 1e-15);
}

TEST(SpinDensity, SingletProperties) {
  const auto rho = spin_density(spin_singlet(0));
  EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
  EXPECT_NEAR(negativity(rho), 0.5, 1e-12);
  EXPECT_NEAR(negativity(product_rl()), 0.0, 1e-12);
}

TEST(SpinDensity, SourceReducesToSinglet) {
  const auto a = spin_density(make_source_state(3)).matrix();
  const auto b = spin_density(spin_singlet(3)).matrix();
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SpinDensity, FromMatrixValidates) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() / 4.0;
  EXPECT_NO_THROW(SpinDensity::from_matrix(m));
  Eigen::Matrix4cd not_hermitian = m;
  not_hermitian(0, 1) = std::complex<double>(0.1, 0.0);
  EXPECT_THROW(SpinDensity::from_matrix(not_hermitian), std::invalid_argument);
  EXPECT_THROW(SpinDensity::from_matrix(m * 2.0), std::invalid_argument);
  Eigen::Matrix4cd negative = Eigen::Matrix4cd::Zero();
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(SpinDensity::from_matrix(negative), std::invalid_argument);
}

TEST(SpinDensity, MixtureNegativity) {
  const std::vector<std::pair<double, SpinDensity>> ens{{0.5, spin_density(spin_singlet(0))},
                                                        {0.5, product_rl()}};
  const auto rho = mix(ens);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
  EXPECT_NEAR(negativity(rho), 0.25, 1e-12);
}

TEST(SpinDensity, CorrelationAndChshOfSinglet) {
  const auto singlet = spin_singlet(0);
  for (double a : {0.0, 0.3, 1.1}) {
    for (double b : {0.0, 0.7, 2.9}) {
      EXPECT_NEAR(correlation_e(singlet, PolarizationAngle(a), PolarizationAngle(b)),
                  -std::cos(2 * (a - b)), 1e-12);
    }
  }
  EXPECT_NEAR(chsh_value(singlet, ChshAngles{}), 2 * std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(visibility(singlet, PolarizationAngle(kPi / 4)), 1.0, 1e-12);
}

TEST(SpinDensity, ProductStateIsFlat) {
  const auto rho = product_rl();
  for (double phi : {0.0, 0.4, 1.3}) {
    EXPECT_NEAR(polarization_coincidence(rho, PolarizationAngle(0.2), PolarizationAngle(phi)),
                0.25, 1e-12);
  }
  EXPECT_NEAR(visibility(rho, PolarizationAngle(kPi / 4)), 0.0, 1e-12);
  EXPECT_NEAR(chsh_value(rho, ChshAngles{}), 0.0, 1e-12);
}

TEST(SpinDensity, MixRejectsBadWeights) {
  const std::vector<std::pair<double, SpinDensity>> short_sum{{0.4, product_rl()}};
  EXPECT_THROW(mix(short_sum), std::invalid_argument);
  const std::vector<std::pair<double, SpinDensity>> negative{{1.5, product_rl()},
                                                             {-0.5, product_rl()}};
  EXPECT_THROW(mix(negative), std::invalid_argument);
}

}  // namespace
}  // namespace hyperqkd
