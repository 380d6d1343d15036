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

#include "hyperqkd/counter_rng.hpp"

namespace hyperqkd {

std::uint64_t splitmix64_mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

TrialRandom::TrialRandom(std::uint64_t seed, std::uint64_t trial_index)
    : key_(splitmix64_mix(splitmix64_mix(seed) ^ splitmix64_mix(trial_index + 0x632be59bd9b4e019ULL))) {}

std::uint64_t TrialRandom::bits(Draw slot) const {
  return splitmix64_mix(key_ ^ ((static_cast<std::uint64_t>(slot) + 1) * 0xd1b54a32d192ed03ULL));
}

double TrialRandom::uniform(Draw slot) const {
  return static_cast<double>(bits(slot) >> 11) * 0x1.0p-53;
}

}  // namespace hyperqkd
