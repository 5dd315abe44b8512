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

#ifndef ROTEST_CSV_HPP
#define ROTEST_CSV_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rotest {

/// UTF-8, comma-separated, '.' decimal, header required, no quoting (field
/// values must not contain commas).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(const std::string& name) const;
  /// Column index or SchemaError naming the missing column.
  std::size_t require_column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);  // IoError when unreadable

/// Fixed 10-significant-digit rendering used by every emitter.
std::string format_double(double v);

/// Parses a double; ValueError mentions `context` on failure.
double parse_double(const std::string& s, const std::string& context);

/// Parses a nonnegative integer; ValueError mentions `context` on failure.
std::size_t parse_count(const std::string& s, const std::string& context);

}  // namespace rotest

#endif  // ROTEST_CSV_HPP
