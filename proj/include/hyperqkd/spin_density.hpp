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

#include <numbers>
#include <span>
#include <utility>

#include <Eigen/Core>

#include "hyperqkd/two_photon_state.hpp"

namespace hyperqkd {

/// Linear polarizer orientation, reduced into [0, pi).
class PolarizationAngle {
 public:
  constexpr PolarizationAngle() = default;
  explicit PolarizationAngle(double radians);

  double radians() const { return theta_; }
  /// The orthogonal orientation, theta + pi/2 (mod pi).
  PolarizationAngle perpendicular() const { return PolarizationAngle(theta_ + std::numbers::pi / 2); }

 private:
  double theta_ = 0.0;
};

/// Circular-basis components (R, L) of the linear polarization state
/// cos(theta)|H> + sin(theta)|V>.
Eigen::Vector2cd linear_polarization(PolarizationAngle theta);

/// Reduced density operator of the two spins, with the OAM labels traced
/// out. Basis order: (+1,+1), (+1,-1), (-1,+1), (-1,-1).
class SpinDensity {
 public:
  static constexpr double kHermitianTolerance = 1e-12;
  static constexpr double kTraceTolerance = 1e-12;
  static constexpr double kEigenvalueFloor = -1e-10;

  /// Validates hermiticity, unit trace and positivity.
  /// Throws std::invalid_argument otherwise.
  static SpinDensity from_matrix(const Eigen::Matrix4cd& rho);

  static int index(int s_a, int s_b) { return 2 * (s_a < 0 ? 1 : 0) + (s_b < 0 ? 1 : 0); }

  const Eigen::Matrix4cd& matrix() const { return rho_; }
  double purity() const;

 private:
  explicit SpinDensity(Eigen::Matrix4cd rho) : rho_(std::move(rho)) {}
  Eigen::Matrix4cd rho_;
};

SpinDensity spin_density(const TwoPhotonState& state);

/// Classical mixture sum_i w_i rho_i; weights must be nonnegative and sum to 1.
SpinDensity mix(std::span<const std::pair<double, SpinDensity>> ensemble);

/// Sum of |negative eigenvalues| of the partial transpose over photon B.
double negativity(const SpinDensity& rho);

/// Probability that both photons pass polarizers at (theta, phi), summed
/// over OAM labels.
double polarization_coincidence(const SpinDensity& rho, PolarizationAngle theta,
                                PolarizationAngle phi);
double polarization_coincidence(const TwoPhotonState& state, PolarizationAngle theta,
                                PolarizationAngle phi);

/// E(a,b) = P(a,b) + P(a',b') - P(a,b') - P(a',b) with primes meaning the
/// orthogonal polarizer, probabilities renormalized by their sum.
double correlation_e(const SpinDensity& rho, PolarizationAngle a, PolarizationAngle b);
double correlation_e(const TwoPhotonState& state, PolarizationAngle a, PolarizationAngle b);

struct ChshAngles {
  PolarizationAngle a{0.0};
  PolarizationAngle a_prime{std::numbers::pi / 4};
  PolarizationAngle b{std::numbers::pi / 8};
  PolarizationAngle b_prime{3 * std::numbers::pi / 8};
};

/// S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|.
double chsh_value(const SpinDensity& rho, const ChshAngles& angles);
double chsh_value(const TwoPhotonState& state, const ChshAngles& angles);

/// Fringe visibility of the coincidence curve for fixed theta, phi swept over
/// 360 uniform points on [0, pi).
double visibility(const SpinDensity& rho, PolarizationAngle theta_fixed);
double visibility(const TwoPhotonState& state, PolarizationAngle theta_fixed);

}  // namespace hyperqkd
