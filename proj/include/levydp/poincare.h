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

#ifndef LEVYDP_POINCARE_H_
#define LEVYDP_POINCARE_H_

#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace levydp {

// Constants (a, b) of an alpha-stable Poincare inequality
//
//   Var_mu(f) <= a C_{alpha,d} int int (f(x) - f(x+z))^2 |z|^{-d-alpha}
//                    dmu(x) dz  +  b int |grad f|^2 dmu.
struct PoincareConstants {
  double frac = 0.0;
  double gauss = 0.0;

  friend bool operator==(const PoincareConstants&,
                         const PoincareConstants&) = default;
};

absl::Status ValidateConstants(const PoincareConstants& c);

// Law of X + Y for independent X, Y: constants add.
PoincareConstants Convolve(const PoincareConstants& c1,
                           const PoincareConstants& c2);

// Push-forward by a C^1 diffeomorphism T with
// L1 |x - y| <= |T x - T y| <= L2 |x - y|:
// (frac L2^(alpha+d) / L1^d, gauss L2^2).
absl::StatusOr<PoincareConstants> PushforwardBiLipschitz(
    const PoincareConstants& c, double lower_lipschitz,
    double upper_lipschitz, double alpha, int d);

// Density ratio within [e^-b, e^b]: both constants scale by e^(2b).
absl::StatusOr<PoincareConstants> PerturbBounded(const PoincareConstants& c,
                                                 double b);

// lambda-strongly convex, M-smooth loss; heavy-tailed GD with step eta and
// stable scale sigma, no projection.
struct ConvexProblem {
  double lambda = 1.0;
  double smoothness = 1.0;  // M
  double eta = 0.1;
  double sigma = 1.0;
  double alpha = 1.5;
  int d = 1;
};

// Denominator exponent of the one-step contraction factor
// F(eta) = (1 - eta lambda)^(alpha+d) / (1 - eta M)^p.
//  kDimension: p = d, obtained by composing the bi-Lipschitz push-forward
//              (L1 = 1 - eta M, L2 = 1 - eta lambda). Default.
//  kTailIndex: p = alpha, the exponent as usually quoted with the
//              proposition. Kept for comparison only.
enum class ContractionExponent { kDimension, kTailIndex };

struct TrackResult {
  PoincareConstants constants;  // after k steps; gauss stays 0
  double condition_value = 0.0;  // (lambda / M) (1 + alpha / d)
  bool admissible = false;       // condition_value > 1
  double eta0 = 0.0;             // ((alpha+d) lambda - d M) / (alpha lambda M)
  double factor_at_eta0 = 0.0;   // F(eta0)
  double factor = 0.0;           // F(eta)
  double c0 = 0.0;               // eta sigma^alpha / (1 - F(eta0))
  // True when the k-step constant is certified to stay <= c0: admissible,
  // gamma0 <= c0, and F(eta) <= F(eta0). The last condition only holds at
  // eta = eta0, since eta0 minimizes F.
  bool bounded_by_c0 = false;
};

// Iterates c <- F(eta) c + eta sigma^alpha for k steps from gamma0. Invalid
// inputs (lambda > M, eta >= 1/M, ...) are errors; a violated condition is
// reported through `admissible` and `condition_value`, with eta0 and c0 left
// at zero.
absl::StatusOr<TrackResult> TrackSgd(
    const ConvexProblem& problem, double gamma0, int64_t k,
    ContractionExponent exponent = ContractionExponent::kDimension);

// One step of the tracker, written as push-forward then convolution.
absl::StatusOr<PoincareConstants> SgdStep(const ConvexProblem& problem,
                                          const PoincareConstants& c);

}  // namespace levydp

#endif  // LEVYDP_POINCARE_H_
