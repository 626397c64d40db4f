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

#include "levydp/poincare.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "levydp/constants.h"

namespace levydp {
namespace {

absl::Status ValidateProblem(const ConvexProblem& p) {
  if (absl::Status s = ValidateFractionalIndex(p.alpha); !s.ok()) return s;
  if (absl::Status s = ValidateDimension(p.d); !s.ok()) return s;
  if (!(p.lambda > 0.0) || !(p.smoothness >= p.lambda) ||
      !std::isfinite(p.smoothness)) {
    return absl::OutOfRangeError(absl::StrCat(
        "need 0 < lambda <= M, got lambda=", p.lambda, " M=", p.smoothness));
  }
  if (!(p.eta > 0.0) || !(p.eta * p.smoothness < 1.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("need 0 < eta < 1/M, got eta=", p.eta));
  }
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
    return absl::OutOfRangeError("stable scale sigma must be positive");
  }
  return absl::OkStatus();
}

double Factor(const ConvexProblem& p, double eta,
              ContractionExponent exponent) {
  const double denominator_power =
      exponent == ContractionExponent::kDimension ? p.d : p.alpha;
  // Same arithmetic as PushforwardBiLipschitz with L1 = 1 - eta M and
  // L2 = 1 - eta lambda, so one tracker step equals SgdStep bit for bit.
  return std::exp((p.alpha + p.d) * std::log(1.0 - eta * p.lambda) -
                  denominator_power * std::log(1.0 - eta * p.smoothness));
}

}  // namespace

absl::Status ValidateConstants(const PoincareConstants& c) {
  if (!(c.frac >= 0.0) || !(c.gauss >= 0.0) || !std::isfinite(c.frac) ||
      !std::isfinite(c.gauss)) {
    return absl::OutOfRangeError(absl::StrCat(
        "Poincare constants must be nonnegative, got (", c.frac, ", ",
        c.gauss, ")"));
  }
  return absl::OkStatus();
}

PoincareConstants Convolve(const PoincareConstants& c1,
                           const PoincareConstants& c2) {
  return {c1.frac + c2.frac, c1.gauss + c2.gauss};
}

absl::StatusOr<PoincareConstants> PushforwardBiLipschitz(
    const PoincareConstants& c, double lower_lipschitz,
    double upper_lipschitz, double alpha, int d) {
  if (absl::Status s = ValidateConstants(c); !s.ok()) return s;
  if (absl::Status s = ValidateFractionalIndex(alpha); !s.ok()) return s;
  if (absl::Status s = ValidateDimension(d); !s.ok()) return s;
  if (!(lower_lipschitz > 0.0) || !(lower_lipschitz <= upper_lipschitz) ||
      !std::isfinite(upper_lipschitz)) {
    return absl::OutOfRangeError(
        absl::StrCat("need 0 < L1 <= L2, got L1=", lower_lipschitz,
                     " L2=", upper_lipschitz));
  }
  const double frac_factor =
      std::exp((alpha + d) * std::log(upper_lipschitz) -
               d * std::log(lower_lipschitz));
  return PoincareConstants{c.frac * frac_factor,
                           c.gauss * upper_lipschitz * upper_lipschitz};
}

absl::StatusOr<PoincareConstants> PerturbBounded(const PoincareConstants& c,
                                                 double b) {
  if (absl::Status s = ValidateConstants(c); !s.ok()) return s;
  if (!(b >= 0.0) || !std::isfinite(b)) {
    return absl::OutOfRangeError(
        absl::StrCat("perturbation size b must be >= 0, got ", b));
  }
  const double factor = std::exp(2.0 * b);
  return PoincareConstants{c.frac * factor, c.gauss * factor};
}

absl::StatusOr<PoincareConstants> SgdStep(const ConvexProblem& problem,
                                          const PoincareConstants& c) {
  if (absl::Status s = ValidateProblem(problem); !s.ok()) return s;
  absl::StatusOr<PoincareConstants> pushed = PushforwardBiLipschitz(
      c, 1.0 - problem.eta * problem.smoothness,
      1.0 - problem.eta * problem.lambda, problem.alpha, problem.d);
  if (!pushed.ok()) return pushed.status();
  return Convolve(*pushed,
                  {problem.eta * std::pow(problem.sigma, problem.alpha), 0.0});
}

absl::StatusOr<TrackResult> TrackSgd(const ConvexProblem& problem,
                                     double gamma0, int64_t k,
                                     ContractionExponent exponent) {
  if (absl::Status s = ValidateProblem(problem); !s.ok()) return s;
  if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) {
    return absl::OutOfRangeError("initial constant gamma0 must be >= 0");
  }
  if (k < 0) return absl::OutOfRangeError("step count must be >= 0");

  const double lambda = problem.lambda;
  const double m = problem.smoothness;
  const double alpha = problem.alpha;
  const double d = problem.d;

  TrackResult out;
  out.condition_value = lambda / m * (1.0 + alpha / d);
  out.admissible = out.condition_value > 1.0;
  out.factor = Factor(problem, problem.eta, exponent);

  const double injected = problem.eta * std::pow(problem.sigma, alpha);
  double c = gamma0;
  for (int64_t i = 0; i < k; ++i) c = out.factor * c + injected;
  out.constants = {c, 0.0};

  if (out.admissible) {
    out.eta0 = ((alpha + d) * lambda - d * m) / (alpha * lambda * m);
    out.factor_at_eta0 = Factor(problem, out.eta0, exponent);
    out.c0 = injected / (1.0 - out.factor_at_eta0);
    out.bounded_by_c0 = out.factor_at_eta0 < 1.0 && gamma0 <= out.c0 &&
                        out.factor <= out.factor_at_eta0;
  }
  return out;
}

}  // namespace levydp
