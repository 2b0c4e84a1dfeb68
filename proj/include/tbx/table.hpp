/*
 Copyright 2026 The tbx Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tbx {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Named columns, one row per record. add_row enforces the shape.
class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  void add_row(std::vector<Cell> row);
  std::size_t column_index(std::string_view name) const;  // throws std::out_of_range
  double number(std::size_t row, std::string_view column) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// %.17g for doubles; strings are quoted only when they need it.
std::string format_cell(const Cell& c);

void emit_csv(const ResultTable& table, const std::filesystem::path& path);
void write_csv(const ResultTable& table, std::ostream& out);

/// Reads what emit_csv writes. Cells that parse fully as numbers become
/// doubles (integers included); everything else stays a string.
ResultTable read_csv(const std::filesystem::path& path);
ResultTable parse_csv(std::string_view text);

/// Writes `<dir>/<cell>_<column>.dat` for every column except the first,
/// which must be the time column. Each file starts with a `#` header line.
std::vector<std::filesystem::path> emit_plot_data(const ResultTable& series,
                                                  const std::filesystem::path& dir,
                                                  std::string_view cell);

}  // namespace tbx
