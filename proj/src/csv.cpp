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

#include "srcver/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "srcver/error.hpp"

namespace srcver::csv {

Table parse(std::string_view text, const std::string &origin) {
  std::vector<Row> rows;
  std::vector<std::size_t> lines;
  Row row;
  std::string field;
  bool in_quotes = false, field_started = false, row_started = false;
  std::size_t line = 1, row_line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    lines.push_back(row_line);
    row.clear();
    row_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (!row_started) {
      row_started = true;
      row_line = line;
    }
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started)
          throw Error(Errc::kMalformedRecord,
                      origin + ":" + std::to_string(line) + ": stray quote");
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        field.push_back(c);
        field_started = true;
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes)
    throw Error(Errc::kMalformedRecord,
                origin + ":" + std::to_string(line) + ": unterminated quote");
  if (row_started) end_row();

  Table table;
  if (rows.empty()) return table;
  table.header = std::move(rows.front());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    // Blank lines carry no record.
    if (rows[i].size() == 1 && rows[i][0].empty()) continue;
    if (rows[i].size() != table.header.size())
      throw Error(Errc::kMalformedRecord,
                  origin + ":" + std::to_string(lines[i]) + ": expected " +
                      std::to_string(table.header.size()) + " fields, got " +
                      std::to_string(rows[i].size()));
    table.rows.push_back(std::move(rows[i]));
    table.lines.push_back(lines[i]);
  }
  return table;
}

Table read(const std::filesystem::path &path, const Row &expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
  Table table = parse(text, path.string());
  if (!expected_header.empty() && table.header != expected_header)
    throw Error(Errc::kMalformedRecord,
                path.string() + ":1: expected header '" +
                    format_row(expected_header) + "'");
  return table;
}

std::string format_row(const Row &row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    const std::string &f = row[i];
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
      out += f;
      continue;
    }
    out.push_back('"');
    for (char c : f) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    out.push_back('"');
  }
  return out;
}

void write(const std::filesystem::path &path, const Row &header,
           const std::vector<Row> &rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoError, "cannot write '" + path.string() + "'");
  out << format_row(header) << '\n';
  for (const auto &row : rows) out << format_row(row) << '\n';
  if (!out) throw Error(Errc::kIoError, "short write to '" + path.string() + "'");
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_float(float value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string &context) {
  double value = 0.0;
  const char *first = text.data();
  const char *last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || first == last)
    throw Error(Errc::kMalformedRecord,
                context + ": not a number '" + std::string(text) + "'");
  return value;
}

long long parse_int(std::string_view text, const std::string &context) {
  long long value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() ||
      text.empty())
    throw Error(Errc::kMalformedRecord,
                context + ": not an integer '" + std::string(text) + "'");
  return value;
}

}  // namespace srcver::csv
