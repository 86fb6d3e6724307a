// Copyright 2026 The Homophily Authors
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

#include "homophily/csv.h"

#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"

namespace homophily {

std::optional<size_t> CsvTable::Column(absl::string_view name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

absl::StatusOr<CsvTable> ReadCsv(std::istream& in) {
  CsvTable t;
  std::string line;
  size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    std::vector<std::string> fields = absl::StrSplit(line, ',');
    for (std::string& f : fields) absl::StripAsciiWhitespace(&f);
    if (!have_header) {
      if (line_no == 1 && absl::StartsWith(fields[0], "\xEF\xBB\xBF")) {
        fields[0].erase(0, 3);
      }
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d has %d fields, header has %d", line_no, fields.size(),
          t.header.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  if (!have_header) {
    return absl::InvalidArgumentError("CSV input is empty (no header row)");
  }
  return t;
}

absl::StatusOr<CsvTable> ReadCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  absl::StatusOr<CsvTable> t = ReadCsv(in);
  if (!t.ok()) {
    return absl::Status(t.status().code(),
                        absl::StrFormat("%s: %s", path, t.status().message()));
  }
  return t;
}

absl::StatusOr<std::vector<size_t>> RequireColumns(
    const CsvTable& table, const std::vector<std::string>& names) {
  std::vector<size_t> out;
  for (const std::string& n : names) {
    std::optional<size_t> c = table.Column(n);
    if (!c.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("missing column '%s'", n));
    }
    out.push_back(*c);
  }
  return out;
}

}  // namespace homophily
