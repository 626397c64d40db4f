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

#ifndef LEVYDP_PRIVACY_CORE_H_
#define LEVYDP_PRIVACY_CORE_H_

#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace levydp {

// Which family of bounds governs a guarantee.
//  kLinear:     only f(t) <= f0 + K t is available (K >= a).
//  kTimeUniform: K < a and f0 <= log(a / (a - K)); the level log(a/(a-K))
//               bounds f for all t.
//  kDecaying:   K < a and f0 above that level; the bound relaxes towards it
//               exponentially fast.
enum class Regime { kLinear, kTimeUniform, kDecaying };

std::string_view RegimeName(Regime regime);

// Parameters of the differential inequality f' <= K - a (1 - exp(-f)).
struct EnvelopeParams {
  double drive = 0.0;        // K >= 0
  double contraction = 1.0;  // a > 0
  double initial = 0.0;      // f(0+) >= 0
};

absl::Status ValidateEnvelope(const EnvelopeParams& p);

struct EnvelopeBound {
  double value = 0.0;   // tightest applicable bound
  double linear = 0.0;  // f0 + K t, always valid
  // log(a / (a - K)) when K < a.
  std::optional<double> uniform_level;
  Regime regime = Regime::kLinear;
};

// Upper bound on any f with f(0+) = initial satisfying the inequality above,
// at time t >= 0: the minimum over all cases whose hypotheses hold. The
// bounds are extended to t = 0 by continuity.
absl::StatusOr<EnvelopeBound> SolveEnvelope(const EnvelopeParams& p, double t);

// log(a/(a-K)) + log(1 + exp(-(a-K) t) (exp(f0) (a-K)/a - 1)), evaluated
// in a form that does not overflow for large f0. Requires K < a. This is the
// exact solution of f' = K - a (1 - exp(-f)) for every f0.
absl::StatusOr<double> DecayingEnvelope(const EnvelopeParams& p, double t);

// (beta, kappa)-Renyi DP.
struct RdpGuarantee {
  double beta = 2.0;
  double kappa = 0.0;
  Regime regime = Regime::kLinear;
};

// Conversion lemmas require beta > 1; the accountant bounds need beta >= 2.
absl::Status ValidateConversionOrder(double beta);
absl::Status ValidateAccountantOrder(double beta);

// epsilon = kappa + log(1/delta) / (beta - 1), for delta in (0, 1].
absl::StatusOr<double> RdpToEpsilonDelta(const RdpGuarantee& g, double delta);

// delta = min(1, sqrt(kappa / 2)) for pure (0, delta)-DP.
absl::StatusOr<double> RdpToZeroDelta(const RdpGuarantee& g);

struct BetaChoice {
  RdpGuarantee guarantee;
  double epsilon = 0.0;
};

// Minimizes the converted epsilon over `grid`; ties go to the smaller beta.
absl::StatusOr<BetaChoice> OptimizeBeta(
    const std::function<absl::StatusOr<RdpGuarantee>(double)>& bound_at_beta,
    std::span<const double> grid, double delta);

}  // namespace levydp

#endif  // LEVYDP_PRIVACY_CORE_H_
