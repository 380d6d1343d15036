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

namespace hyperqkd {

/// Exact (alice_key, bob_key) distribution over sifted rounds of the
/// state-vector model, obtained by walking every variable choice, Eve branch
/// and Born outcome. It is the reference the physical Monte Carlo is
/// validated against; it is independent of the sampling path.
JointDistribution physical_joint_distribution(int l0, double eta, double epsilon);
JointDistribution physical_joint_distribution(int l0, double eta);

}  // namespace hyperqkd
