/*
Copyright 2026 The commfeat Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace commfeat::csv {

/// Splits one CSV record (RFC-4180 quoting, no embedded newlines).
std::vector<std::string> split_record(std::string_view line, std::size_t line_number = 0);

/// Quotes a field when it holds a comma, quote or line break.
std::string escape(std::string_view field);

/// Shortest text that reads back to the same double.
std::string format_double(double value);

/// Writes the fields joined by commas and terminated by '\n'.
void write_record(std::ostream& out, const std::vector<std::string>& fields);

/// Reads all records; strips a trailing '\r'. Blank lines are skipped.
/// The first record is the header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;
};

Table read_table(std::istream& in);

}  // namespace commfeat::csv
