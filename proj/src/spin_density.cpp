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

#include "hyperqkd/spin_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "hyperqkd/errors.hpp"

namespace hyperqkd {
namespace {

constexpr double kDegenerateSum = 1e-12;
constexpr int kVisibilityGrid = 360;

Eigen::Vector4cd joint_polarization(PolarizationAngle theta, PolarizationAngle phi) {
  const Eigen::Vector2cd a = linear_polarization(theta);
  const Eigen::Vector2cd b = linear_polarization(phi);
  Eigen::Vector4cd v;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) v(2 * i + k) = a(i) * b(k);
  }
  return v;
}

Eigen::Matrix4cd partial_transpose_b(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) out(2 * a + b, 2 * ap + bp) = rho(2 * a + bp, 2 * ap + b);
  return out;
}

}  // namespace

PolarizationAngle::PolarizationAngle(double radians) {
  double t = std::fmod(radians, std::numbers::pi);
  if (t < 0) t += std::numbers::pi;
  if (t >= std::numbers::pi) t = 0.0;
  theta_ = t;
}

Eigen::Vector2cd linear_polarization(PolarizationAngle theta) {
  // cos t |H> + sin t |V> with |H>, |V> expanded over R, L.
  const double t = theta.radians();
  const double r = std::numbers::sqrt2 / 2;
  return Eigen::Vector2cd(std::polar(r, t), std::polar(r, -t));
}

SpinDensity SpinDensity::from_matrix(const Eigen::Matrix4cd& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw std::invalid_argument("spin density is not Hermitian");
  }
  if (std::abs(rho.trace() - std::complex<double>(1.0)) > kTraceTolerance) {
    throw std::invalid_argument("spin density trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < kEigenvalueFloor) {
    throw std::invalid_argument("spin density is not positive semidefinite");
  }
  return SpinDensity(rho);
}

double SpinDensity::purity() const { return (rho_ * rho_).trace().real(); }

SpinDensity spin_density(const TwoPhotonState& state) {
  // Group amplitudes by the OAM labels, then accumulate the outer product of
  // each spin block.
  std::map<std::pair<int, int>, Eigen::Vector4cd> blocks;
  for (const auto& [key, amp] : state.terms()) {
    auto [it, inserted] = blocks.try_emplace({key.a.l, key.b.l}, Eigen::Vector4cd::Zero());
    it->second(SpinDensity::index(key.a.s, key.b.s)) += amp;
  }
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (const auto& [labels, v] : blocks) rho += v * v.adjoint();
  return SpinDensity::from_matrix(rho);
}

SpinDensity mix(std::span<const std::pair<double, SpinDensity>> ensemble) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  double total = 0.0;
  for (const auto& [w, d] : ensemble) {
    if (w < 0) throw std::invalid_argument("mix: negative weight");
    rho += w * d.matrix();
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mix: weights must sum to 1");
  return SpinDensity::from_matrix(rho);
}

double negativity(const SpinDensity& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(partial_transpose_b(rho.matrix()),
                                                         Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (double ev : solver.eigenvalues()) {
    if (ev < 0) neg -= ev;
  }
  return neg;
}

double polarization_coincidence(const SpinDensity& rho, PolarizationAngle theta,
                                PolarizationAngle phi) {
  const Eigen::Vector4cd v = joint_polarization(theta, phi);
  return std::max(0.0, (v.adjoint() * rho.matrix() * v)(0).real());
}

double polarization_coincidence(const TwoPhotonState& state, PolarizationAngle theta,
                                PolarizationAngle phi) {
  return polarization_coincidence(spin_density(state), theta, phi);
}

double correlation_e(const SpinDensity& rho, PolarizationAngle a, PolarizationAngle b) {
  const PolarizationAngle ap = a.perpendicular();
  const PolarizationAngle bp = b.perpendicular();
  const double same = polarization_coincidence(rho, a, b) + polarization_coincidence(rho, ap, bp);
  const double diff = polarization_coincidence(rho, a, bp) + polarization_coincidence(rho, ap, b);
  const double sum = same + diff;
  if (sum < kDegenerateSum) {
    throw DegenerateCorrelation("correlation_e: outcome probabilities vanish");
  }
  return (same - diff) / sum;
}

double correlation_e(const TwoPhotonState& state, PolarizationAngle a, PolarizationAngle b) {
  return correlation_e(spin_density(state), a, b);
}

double chsh_value(const SpinDensity& rho, const ChshAngles& x) {
  return std::abs(correlation_e(rho, x.a, x.b) - correlation_e(rho, x.a, x.b_prime) +
                  correlation_e(rho, x.a_prime, x.b) + correlation_e(rho, x.a_prime, x.b_prime));
}

double chsh_value(const TwoPhotonState& state, const ChshAngles& angles) {
  return chsh_value(spin_density(state), angles);
}

double visibility(const SpinDensity& rho, PolarizationAngle theta_fixed) {
  double p_max = -std::numeric_limits<double>::infinity();
  double p_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kVisibilityGrid; ++i) {
    const PolarizationAngle phi(std::numbers::pi * i / kVisibilityGrid);
    const double p = polarization_coincidence(rho, theta_fixed, phi);
    p_max = std::max(p_max, p);
    p_min = std::min(p_min, p);
  }
  if (p_max + p_min < kDegenerateSum) {
    throw DegenerateCorrelation("visibility: coincidence curve vanishes");
  }
  return (p_max - p_min) / (p_max + p_min);
}

double visibility(const TwoPhotonState& state, PolarizationAngle theta_fixed) {
  return visibility(spin_density(state), theta_fixed);
}

}  // namespace hyperqkd
