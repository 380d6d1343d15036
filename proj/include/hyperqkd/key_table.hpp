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
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace hyperqkd {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }
inline double to_double(double x) { return x; }

/// One key symbol: an integer key value |k| <= l0, or the no-key marker.
class KeySymbol {
 public:
  static KeySymbol none() { return KeySymbol(); }
  static KeySymbol value(int k, int l0) {
    if (std::abs(k) > l0) {
      throw std::out_of_range("key value " + std::to_string(k) + " outside |k| <= " +
                              std::to_string(l0));
    }
    return KeySymbol(k);
  }
  /// Maps a raw value to a key: in range -> Value, otherwise NoKey.
  static KeySymbol from_raw(int raw, int l0) {
    return std::abs(raw) <= l0 ? KeySymbol(raw) : KeySymbol();
  }

  bool is_value() const { return k_.has_value(); }
  int key() const { return k_.value(); }
  const std::optional<int>& raw() const { return k_; }

  friend bool operator==(const KeySymbol&, const KeySymbol&) = default;

 private:
  KeySymbol() = default;
  explicit KeySymbol(int k) : k_(k) {}
  std::optional<int> k_;
};

/// Square probability table over Alice x Bob key symbols. Rows and columns
/// run over k = -l0..l0 followed, when present, by the NoKey symbol.
template <class T>
class KeyTable {
 public:
  KeyTable(int l0, bool with_nokey)
      : l0_(checked(l0)), with_nokey_(with_nokey),
        cells_(static_cast<std::size_t>(dim() * dim()), T(0)) {}

  int l0() const { return l0_; }
  bool has_nokey() const { return with_nokey_; }
  int key_count() const { return 2 * l0_ + 1; }
  int dim() const { return key_count() + (with_nokey_ ? 1 : 0); }
  int nokey_index() const { return key_count(); }

  int index(const KeySymbol& k) const {
    if (k.is_value()) return k.key() + l0_;
    if (!with_nokey_) throw std::out_of_range("key-only table has no NoKey index");
    return nokey_index();
  }

  T& at(int row, int col) { return cells_.at(static_cast<std::size_t>(row * dim() + col)); }
  const T& at(int row, int col) const {
    return cells_.at(static_cast<std::size_t>(row * dim() + col));
  }
  T& at(const KeySymbol& a, const KeySymbol& b) { return at(index(a), index(b)); }
  const T& at(const KeySymbol& a, const KeySymbol& b) const { return at(index(a), index(b)); }

  T row_sum(int row) const {
    T s(0);
    for (int c = 0; c < dim(); ++c) s += at(row, c);
    return s;
  }
  T col_sum(int col) const {
    T s(0);
    for (int r = 0; r < dim(); ++r) s += at(r, col);
    return s;
  }
  T total() const {
    T s(0);
    for (const T& x : cells_) s += x;
    return s;
  }
  /// Mass where both Alice and Bob hold a key value.
  T both_value_mass() const {
    T s(0);
    for (int r = 0; r < key_count(); ++r)
      for (int c = 0; c < key_count(); ++c) s += at(r, c);
    return s;
  }

  const std::vector<T>& cells() const { return cells_; }

  friend bool operator==(const KeyTable&, const KeyTable&) = default;

 private:
  static int checked(int l0) {
    if (l0 < 1) throw std::invalid_argument("key tables need l0 >= 1");
    return l0;
  }

  int l0_;
  bool with_nokey_;
  std::vector<T> cells_;
};

using JointDistribution = KeyTable<double>;
using ExactDistribution = KeyTable<Rational>;

inline JointDistribution to_double(const ExactDistribution& exact) {
  JointDistribution out(exact.l0(), exact.has_nokey());
  for (int r = 0; r < exact.dim(); ++r)
    for (int c = 0; c < exact.dim(); ++c) out.at(r, c) = to_double(exact.at(r, c));
  return out;
}

}  // namespace hyperqkd
