// Copyright 2026 The fumes Authors
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
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fumes/config.hpp"

namespace fumes {

/// Empty strings stand for undefined numeric entries.
using Cell = std::variant<double, std::int64_t, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  void add_row(std::vector<Cell> row);
  bool operator==(const ResultTable& other) const { return columns == other.columns && rows == other.rows; }
};

/// 12 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);
/// v rounded to 12 significant digits.
double round_sig12(double v);

std::string to_csv(const ResultTable& t);
std::string to_json(const ResultTable& t);
ResultTable table_from_json(const std::string& text);

/// Writes `path` in the given format and the metadata to `path.meta.json`.
/// Throws std::runtime_error naming the path on I/O failure.
void emit(const ResultTable& t, OutputFormat format, const std::filesystem::path& path);

}  // namespace fumes
