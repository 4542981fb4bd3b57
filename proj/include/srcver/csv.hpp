// Copyright 2026  srcver authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace srcver::csv {

using Row = std::vector<std::string>;

// RFC 4180 style: comma separated, double-quoted fields may hold commas,
// quotes ("") and newlines. A trailing '\r' before '\n' is dropped.
struct Table {
  Row header;
  std::vector<Row> rows;
  // 1-based line number of each row's first line in the source file.
  std::vector<std::size_t> lines;
};

Table parse(std::string_view text, const std::string &origin);

// Reads and parses a file, throwing Errc::kIoError if it cannot be opened and
// Errc::kMalformedRecord on ragged rows. When `expected_header` is nonempty the
// header must match it exactly.
Table read(const std::filesystem::path &path, const Row &expected_header = {});

std::string format_row(const Row &row);

// Writes header + rows with '\n' line endings.
void write(const std::filesystem::path &path, const Row &header,
           const std::vector<Row> &rows);

// Shortest decimal text that parses back to exactly the same double/float.
std::string format_double(double value);
std::string format_float(float value);

// Strict numeric parsing; throws Errc::kMalformedRecord with `context`.
double parse_double(std::string_view text, const std::string &context);
long long parse_int(std::string_view text, const std::string &context);

}  // namespace srcver::csv
