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

#ifndef LEVYDP_VERIFY_H_
#define LEVYDP_VERIFY_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace levydp {

// One check: lhs <= rhs is claimed, margin = rhs - lhs.
struct VerifyRow {
  std::string check_name;
  std::string parameter_json;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double mc_error = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  uint64_t seed = 1;
  // Multiplies every Monte-Carlo sample count; 1 gives the full sizes.
  double scale = 1.0;
  // Every row additionally needs margin >= min_margin.
  double min_margin = 0.0;
};

// Suite names accepted by RunSuite, without "all".
const std::vector<std::string>& SuiteNames();

// "all" runs every suite in SuiteNames() order.
absl::StatusOr<std::vector<VerifyRow>> RunSuite(std::string_view suite,
                                                const VerifyOptions& options);

void WriteVerifyCsv(const std::vector<VerifyRow>& rows, std::ostream& out);

}  // namespace levydp

#endif  // LEVYDP_VERIFY_H_
