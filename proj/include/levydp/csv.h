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

#ifndef LEVYDP_CSV_H_
#define LEVYDP_CSV_H_

#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"

namespace levydp {

// RFC 4180 field quoting: fields containing a comma, quote, CR or LF are
// quoted with embedded quotes doubled.
std::string CsvField(std::string_view field);

// Shortest decimal form that round-trips, independent of locale.
std::string FormatDouble(double value);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void Row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

// Writes `content` to `path`, creating parent directories.
absl::Status WriteTextFile(const std::string& path, std::string_view content);

// key=value lines in key order.
std::string FormatManifest(const std::map<std::string, std::string>& entries);

}  // namespace levydp

#endif  // LEVYDP_CSV_H_
