//
// Copyright 2026 The LevyDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "levydp/csv.h"

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "gtest/gtest.h"

namespace levydp {
namespace {

TEST(CsvTest, QuotesWhenNeeded) {
  EXPECT_EQ(CsvField("plain"), "plain");
  EXPECT_EQ(CsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(CsvField("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(CsvField("two\nlines"), "\"two\nlines\"");
}

TEST(CsvTest, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 6.02e23, -2.5e-300, 0.0}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
  EXPECT_EQ(FormatDouble(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(FormatDouble(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(FormatDouble(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(CsvTest, WriterUsesCrlf) {
  std::ostringstream out;
  CsvWriter writer(out);
  writer.Row({"a", "b,c"});
  writer.Row({"1", "2"});
  EXPECT_EQ(out.str(), "a,\"b,c\"\r\n1,2\r\n");
}

TEST(CsvTest, ManifestAndFileWriting) {
  EXPECT_EQ(FormatManifest({{"b", "2"}, {"a", "1"}}), "a=1\nb=2\n");
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "levydp_csv_test" / "nested";
  const std::filesystem::path file = dir / "out.txt";
  ASSERT_TRUE(WriteTextFile(file.string(), "hello").ok());
  std::ifstream in(file);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  EXPECT_EQ(content, "hello");
  std::filesystem::remove_all(dir.parent_path());
}

}  // namespace
}  // namespace levydp
