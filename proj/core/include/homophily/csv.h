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

#ifndef HOMOPHILY_CSV_H_
#define HOMOPHILY_CSV_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace homophily {

// Comma-delimited text with a header row. No quoting: fields may not contain
// commas or newlines.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<size_t> Column(absl::string_view name) const;
};

absl::StatusOr<CsvTable> ReadCsv(std::istream& in);
absl::StatusOr<CsvTable> ReadCsvFile(const std::string& path);

// Column indices for `names`, or an error naming the first missing column.
absl::StatusOr<std::vector<size_t>> RequireColumns(
    const CsvTable& table, const std::vector<std::string>& names);

}  // namespace homophily

#endif  // HOMOPHILY_CSV_H_
