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

#include "levydp/privacy_core.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace levydp {

std::string_view RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kLinear:
      return "Linear";
    case Regime::kTimeUniform:
      return "TimeUniform";
    case Regime::kDecaying:
      return "Decaying";
  }
  return "Unknown";
}

absl::Status ValidateEnvelope(const EnvelopeParams& p) {
  if (!(p.contraction > 0.0) || !std::isfinite(p.contraction)) {
    return absl::OutOfRangeError(
        absl::StrCat("contraction a must be positive, got ", p.contraction));
  }
  if (!(p.drive >= 0.0) || !std::isfinite(p.drive)) {
    return absl::OutOfRangeError(
        absl::StrCat("drive K must be nonnegative, got ", p.drive));
  }
  if (!(p.initial >= 0.0) || !std::isfinite(p.initial)) {
    return absl::OutOfRangeError(
        absl::StrCat("initial value f0 must be nonnegative, got ", p.initial));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> DecayingEnvelope(const EnvelopeParams& p, double t) {
  if (absl::Status s = ValidateEnvelope(p); !s.ok()) return s;
  if (!(t >= 0.0)) {
    return absl::OutOfRangeError(absl::StrCat("time must be >= 0, got ", t));
  }
  const double gap = p.contraction - p.drive;
  if (!(gap > 0.0)) {
    return absl::FailedPreconditionError("decaying envelope requires K < a");
  }
  // f = log((1 - e^{-gap t}) a/gap + e^{f0 - gap t}).
  const double level = std::log(p.contraction / gap);
  const double decay = -gap * t;
  const double a_term =
      t > 0.0 ? level + std::log(-std::expm1(decay))
              : -std::numeric_limits<double>::infinity();
  const double b_term = p.initial + decay;
  const double hi = std::max(a_term, b_term);
  const double lo = std::min(a_term, b_term);
  if (std::isinf(lo)) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

absl::StatusOr<EnvelopeBound> SolveEnvelope(const EnvelopeParams& p, double t) {
  if (absl::Status s = ValidateEnvelope(p); !s.ok()) return s;
  if (!(t >= 0.0)) {
    return absl::OutOfRangeError(absl::StrCat("time must be >= 0, got ", t));
  }
  EnvelopeBound out;
  out.linear = p.initial + p.drive * t;
  out.value = out.linear;
  out.regime = Regime::kLinear;
  // K == a is treated as K < a failing.
  if (p.drive < p.contraction) {
    const double level = std::log(p.contraction / (p.contraction - p.drive));
    out.uniform_level = level;
    if (p.initial <= level) {
      out.regime = Regime::kTimeUniform;
      out.value = std::min(out.value, level);
    } else {
      out.regime = Regime::kDecaying;
      absl::StatusOr<double> decaying = DecayingEnvelope(p, t);
      if (!decaying.ok()) return decaying.status();
      out.value = std::min(out.value, *decaying);
    }
  }
  return out;
}

absl::Status ValidateConversionOrder(double beta) {
  if (!(beta > 1.0) || !std::isfinite(beta)) {
    return absl::OutOfRangeError(
        absl::StrCat("Renyi order beta must be > 1, got ", beta));
  }
  return absl::OkStatus();
}

absl::Status ValidateAccountantOrder(double beta) {
  if (!(beta >= 2.0) || !std::isfinite(beta)) {
    return absl::OutOfRangeError(
        absl::StrCat("Renyi order beta must be >= 2, got ", beta));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> RdpToEpsilonDelta(const RdpGuarantee& g, double delta) {
  if (absl::Status s = ValidateConversionOrder(g.beta); !s.ok()) return s;
  if (!(delta > 0.0 && delta <= 1.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("delta must lie in (0, 1], got ", delta));
  }
  if (!(g.kappa >= 0.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("kappa must be nonnegative, got ", g.kappa));
  }
  return g.kappa - std::log(delta) / (g.beta - 1.0);
}

absl::StatusOr<double> RdpToZeroDelta(const RdpGuarantee& g) {
  if (absl::Status s = ValidateConversionOrder(g.beta); !s.ok()) return s;
  if (!(g.kappa >= 0.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("kappa must be nonnegative, got ", g.kappa));
  }
  // delta is a probability.
  return std::min(1.0, std::sqrt(0.5 * g.kappa));
}

absl::StatusOr<BetaChoice> OptimizeBeta(
    const std::function<absl::StatusOr<RdpGuarantee>(double)>& bound_at_beta,
    std::span<const double> grid, double delta) {
  if (grid.empty()) {
    return absl::InvalidArgumentError("beta grid must not be empty");
  }
  std::optional<BetaChoice> best;
  for (double beta : grid) {
    if (absl::Status s = ValidateAccountantOrder(beta); !s.ok()) return s;
    absl::StatusOr<RdpGuarantee> g = bound_at_beta(beta);
    if (!g.ok()) return g.status();
    absl::StatusOr<double> eps = RdpToEpsilonDelta(*g, delta);
    if (!eps.ok()) return eps.status();
    const bool better =
        !best.has_value() || *eps < best->epsilon ||
        (*eps == best->epsilon && g->beta < best->guarantee.beta);
    if (better) best = BetaChoice{*g, *eps};
  }
  return *best;
}

}  // namespace levydp
