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

#ifndef LEVYDP_RUN_CONFIG_H_
#define LEVYDP_RUN_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace levydp {

struct KeySpec {
  enum class Type { kDouble, kInt, kString, kDoubleList };
  std::string key;  // section.name
  Type type = Type::kDouble;
  double min = -1e308;
  double max = 1e308;
  bool min_inclusive = true;
  bool max_inclusive = true;
  std::vector<std::string> choices;  // kString only; empty means free text
  std::optional<std::string> default_value;
  std::string help;
};

// Every recognized key.
const std::vector<KeySpec>& ConfigSchema();
const KeySpec* FindKey(std::string_view key);

// Flat key-value configuration. Values are checked against the schema when
// set, so a RunConfig never holds an unknown key or an out-of-range number.
class RunConfig {
 public:
  // INI text: "key = value" lines, optional [section] headers that prefix
  // later keys, '#' and ';' comments.
  static absl::StatusOr<RunConfig> Parse(std::string_view text);
  static absl::StatusOr<RunConfig> Load(const std::string& path);

  absl::Status Set(std::string_view key, std::string_view value);
  // Applies "key=value".
  absl::Status SetAssignment(std::string_view assignment);

  bool Has(std::string_view key) const;  // explicitly set
  // Explicit value or schema default; NotFound names the key otherwise.
  absl::StatusOr<std::string> GetString(std::string_view key) const;
  absl::StatusOr<double> GetDouble(std::string_view key) const;
  absl::StatusOr<int64_t> GetInt(std::string_view key) const;
  absl::StatusOr<std::vector<double>> GetDoubleList(
      std::string_view key) const;

  // Explicit values plus defaults for every key in `sections`.
  std::map<std::string, std::string> Resolved(
      const std::vector<std::string>& sections) const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace levydp

#endif  // LEVYDP_RUN_CONFIG_H_
