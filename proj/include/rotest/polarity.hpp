// Copyright 2026 The rotest Authors
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

#ifndef ROTEST_POLARITY_HPP
#define ROTEST_POLARITY_HPP

#include <string>

#include "rotest/errors.hpp"

namespace rotest {

/// Whether a positive decision is something the subject wants (a loan) or
/// something imposed on them (a search). This determines how a threshold
/// ordering maps onto "discriminated against".
enum class DecisionPolarity {
  PositiveDesirable,
  PositiveUndesirable,
};

inline std::string to_string(DecisionPolarity p) {
  return p == DecisionPolarity::PositiveDesirable ? "desirable" : "undesirable";
}

inline DecisionPolarity polarity_from_string(const std::string& s) {
  if (s == "desirable") return DecisionPolarity::PositiveDesirable;
  if (s == "undesirable") return DecisionPolarity::PositiveUndesirable;
  throw ValueError("unknown polarity '" + s + "' (expected desirable|undesirable)");
}

}  // namespace rotest

#endif  // ROTEST_POLARITY_HPP
