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

#include <stdexcept>
#include <string>

namespace hyperqkd {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Erasing OAM would merge two distinguishable l branches that share a spin.
class AmbiguousErasure : public Error {
 public:
  using Error::Error;
};

/// The four polarizer outcomes carry (numerically) no probability.
class DegenerateCorrelation : public Error {
 public:
  using Error::Error;
};

class NoKeyRounds : public Error {
 public:
  using Error::Error;
};

class InsufficientBellRounds : public Error {
 public:
  using Error::Error;
};

class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperqkd
