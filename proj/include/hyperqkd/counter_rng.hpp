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

#include <cstdint>

namespace hyperqkd {

/// Fixed draw slots within one protocol trial; each random decision reads
/// its own slot.
enum class Draw : std::uint32_t {
  AliceVariable,
  BobVariable,
  EveIntercept,
  EveVariable,
  AliceOutcome,
  EveOutcome,
  BobOutcome,
  EveStep,
  BobStep,
  Role,
  Disclose,
  BellSetting,
  BellOutcome,
};

/// Counter-based generator: the value of every draw is a pure function of
/// (seed, trial index, slot), hashed with the splitmix64 finalizer.
class TrialRandom {
 public:
  TrialRandom(std::uint64_t seed, std::uint64_t trial_index);

  std::uint64_t bits(Draw slot) const;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform(Draw slot) const;

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64_mix(std::uint64_t x);

}  // namespace hyperqkd
