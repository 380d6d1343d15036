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

#include <compare>
#include <cstdint>
#include <string_view>

namespace hyperqkd {

enum class Party : std::uint8_t { A, B };

/// Which angular momentum component a sorter measures.
enum class Observable : std::uint8_t { OAM, TAM };

inline constexpr Party other(Party p) { return p == Party::A ? Party::B : Party::A; }
inline constexpr Observable other(Observable o) {
  return o == Observable::OAM ? Observable::TAM : Observable::OAM;
}

inline constexpr std::string_view to_string(Observable o) {
  return o == Observable::OAM ? "OAM" : "TAM";
}

/// Single-photon mode: topological charge l and spin s (+1 = R, -1 = L).
struct ModeLabel {
  int l = 0;
  int s = +1;

  /// Eigenvalue of the total angular momentum, j = l + s.
  constexpr int j() const { return l + s; }
  constexpr int eigenvalue(Observable o) const { return o == Observable::OAM ? l : j(); }

  friend constexpr auto operator<=>(const ModeLabel&, const ModeLabel&) = default;
};

/// Joint label of both photons; the key of a sparse amplitude map.
struct ModePair {
  ModeLabel a;
  ModeLabel b;

  constexpr const ModeLabel& of(Party p) const { return p == Party::A ? a : b; }
  constexpr ModeLabel& of(Party p) { return p == Party::A ? a : b; }

  friend constexpr auto operator<=>(const ModePair&, const ModePair&) = default;
};

}  // namespace hyperqkd
