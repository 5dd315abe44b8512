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

#ifndef ROTEST_SAMPLE_HPP
#define ROTEST_SAMPLE_HPP

#include <cstddef>
#include <optional>
#include <vector>

namespace rotest {

/// One observed unit: group membership, the binary decision taken, the
/// realized outcome (observed only for positive decisions), and an optional
/// risk score.
struct SampleRow {
  int group = 0;     // 0 or 1
  int decision = 0;  // 0 or 1
  std::optional<double> outcome;
  std::optional<double> risk;
};

/// Unit-level records for a two-group audit.
struct GroupedSample {
  std::vector<SampleRow> rows;

  std::size_t size() const { return rows.size(); }

  std::size_t count(int group) const {
    std::size_t n = 0;
    for (const auto& r : rows) n += (r.group == group);
    return n;
  }

  std::size_t positives(int group) const {
    std::size_t n = 0;
    for (const auto& r : rows) n += (r.group == group && r.decision == 1);
    return n;
  }

  bool has_all_risks() const {
    for (const auto& r : rows)
      if (!r.risk) return false;
    return true;
  }
};

}  // namespace rotest

#endif  // ROTEST_SAMPLE_HPP
