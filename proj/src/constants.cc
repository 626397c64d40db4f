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

#include "levydp/constants.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "absl/strings/str_cat.h"

namespace levydp {
namespace {

constexpr double kLogPi = 1.1447298858494002;  // log(pi)
constexpr double kLog2 = std::numbers::ln2;

}  // namespace

absl::Status ValidateFractionalIndex(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 2.0 - kMaxAlphaMargin) {
    return absl::OutOfRangeError(
        absl::StrCat("tail index alpha must lie in (0, 2), got ", alpha));
  }
  return absl::OkStatus();
}

absl::Status ValidateAccountantIndex(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 1.0 || alpha >= 2.0 - kMaxAlphaMargin) {
    return absl::OutOfRangeError(
        absl::StrCat("tail index alpha must lie in (1, 2), got ", alpha));
  }
  return absl::OkStatus();
}

absl::Status ValidateDimension(int d) {
  if (d < 1) {
    return absl::OutOfRangeError(
        absl::StrCat("dimension must be >= 1, got ", d));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> StableGeneratorConstant(double alpha, int d) {
  if (absl::Status s = ValidateFractionalIndex(alpha); !s.ok()) return s;
  if (absl::Status s = ValidateDimension(d); !s.ok()) return s;
  const double log_c = std::log(alpha) + (alpha - 1.0) * kLog2 -
                       0.5 * d * kLogPi + std::lgamma(0.5 * (alpha + d)) -
                       std::lgamma(1.0 - 0.5 * alpha);
  if (log_c > std::log(std::numeric_limits<double>::max())) {
    return absl::OutOfRangeError(absl::StrCat(
        "C_{alpha,d} overflows double precision at d = ", d));
  }
  return std::exp(log_c);
}

absl::StatusOr<double> SphereArea(int d) {
  if (absl::Status s = ValidateDimension(d); !s.ok()) return s;
  return std::exp(kLog2 + 0.5 * d * kLogPi - std::lgamma(0.5 * d));
}

absl::StatusOr<double> PureJumpConstant(double alpha, int d, double radius) {
  if (absl::Status s = ValidateFractionalIndex(alpha); !s.ok()) return s;
  if (absl::Status s = ValidateDimension(d); !s.ok()) return s;
  if (!std::isfinite(radius) || radius <= 0.0) {
    return absl::OutOfRangeError(
        absl::StrCat("radius R must be positive and finite, got ", radius));
  }
  const double log_k = std::log(4.0 * (2.0 - alpha) * d) +
                       std::lgamma(0.5 * d) + std::lgamma(1.0 - 0.5 * alpha) -
                       std::log(alpha) - alpha * kLog2 -
                       (2.0 - alpha) * std::log(radius) -
                       std::lgamma(0.5 * (d + alpha));
  return std::exp(log_k);
}

}  // namespace levydp
