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

#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace homophily {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

TEST(ReadCsvTest, HeaderRowsAndWhitespace) {
  std::istringstream in("\xEF\xBB\xBFsrc, dst\r\n1,2\n\n 3 ,4\n");
  CsvTable t = *ReadCsv(in);
  EXPECT_THAT(t.header, ElementsAre("src", "dst"));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_THAT(t.rows[1], ElementsAre("3", "4"));
  EXPECT_EQ(t.Column("dst"), 1u);
  EXPECT_FALSE(t.Column("weight").has_value());
}

TEST(ReadCsvTest, RaggedRowNamesLine) {
  std::istringstream in("a,b\n1,2\n3\n");
  absl::StatusOr<CsvTable> t = ReadCsv(in);
  ASSERT_FALSE(t.ok());
  EXPECT_THAT(t.status().message(), HasSubstr("line 3"));
}

TEST(ReadCsvTest, EmptyInputIsAnError) {
  std::istringstream in("");
  EXPECT_FALSE(ReadCsv(in).ok());
  EXPECT_EQ(ReadCsvFile("/nonexistent.csv").status().code(),
            absl::StatusCode::kNotFound);
}

TEST(RequireColumnsTest, IndicesOrMissingName) {
  std::istringstream in("node_id,label,x\n");
  CsvTable t = *ReadCsv(in);
  EXPECT_THAT(*RequireColumns(t, {"x", "node_id"}), ElementsAre(2, 0));
  absl::StatusOr<std::vector<size_t>> missing = RequireColumns(t, {"y"});
  ASSERT_FALSE(missing.ok());
  EXPECT_THAT(missing.status().message(), HasSubstr("'y'"));
}

}  // namespace
}  // namespace homophily
