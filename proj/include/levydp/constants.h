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

#ifndef LEVYDP_CONSTANTS_H_
#define LEVYDP_CONSTANTS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace levydp {

// Tail indices closer than this to 2 are rejected: Gamma(1 - alpha/2) has a
// pole at alpha = 2 and the constants below degenerate to 0 * infinity.
inline constexpr double kMaxAlphaMargin = 1e-9;

// Checks 0 < alpha < 2 (with the margin above).
absl::Status ValidateFractionalIndex(double alpha);

// Checks 1 < alpha < 2, the range the privacy bounds are stated for.
absl::Status ValidateAccountantIndex(double alpha);

absl::Status ValidateDimension(int d);

// Normalizing constant of the rotationally invariant alpha-stable Levy
// measure nu(dz) = C dz / |z|^(alpha + d), so that the generator is
// -(-Delta)^(alpha/2) and E exp(i<xi, L_1>) = exp(-|xi|^alpha):
//
//   C = alpha 2^(alpha-1) pi^(-d/2) Gamma((alpha+d)/2) / Gamma(1 - alpha/2).
//
// Evaluated in log space, so d up to ~1e4 does not overflow.
absl::StatusOr<double> StableGeneratorConstant(double alpha, int d);

// Surface area of the unit sphere S^(d-1): 2 pi^(d/2) / Gamma(d/2).
absl::StatusOr<double> SphereArea(int d);

// Dimension constant of the pure-jump privacy bound,
//
//   K = 4 (2-alpha) d Gamma(d/2) Gamma(1-alpha/2)
//       / (alpha 2^alpha R^(2-alpha) Gamma((d+alpha)/2)).
//
// R is the (non-constructive) radius below which the fractional Dirichlet
// form is compared to the gradient form. K scales as R^(alpha-2).
absl::StatusOr<double> PureJumpConstant(double alpha, int d, double radius);

}  // namespace levydp

#endif  // LEVYDP_CONSTANTS_H_
