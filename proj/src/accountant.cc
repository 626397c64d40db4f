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

#include "levydp/accountant.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "levydp/constants.h"

namespace levydp {
namespace {

absl::Status ValidateCommon(const AccountingParams& p, const Horizon& h) {
  if (p.n < 1) {
    return absl::OutOfRangeError(absl::StrCat("n must be >= 1, got ", p.n));
  }
  if (absl::Status s = ValidateDimension(p.d); !s.ok()) return s;
  if (absl::Status s = ValidateAccountantOrder(p.beta); !s.ok()) return s;
  if (!(p.sensitivity >= 0.0) || !std::isfinite(p.sensitivity)) {
    return absl::OutOfRangeError(absl::StrCat(
        "sensitivity must be nonnegative and finite, got ", p.sensitivity));
  }
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) {
    return absl::OutOfRangeError(
        absl::StrCat("gamma must be positive, got ", p.gamma));
  }
  if (!(p.initial_divergence >= 0.0)) {
    return absl::OutOfRangeError("initial divergence must be nonnegative");
  }
  if (h.kind == Horizon::Kind::kDiscrete) {
    if (h.k < 0) return absl::OutOfRangeError("step count k must be >= 0");
    if (!(h.eta > 0.0)) return absl::OutOfRangeError("step size must be > 0");
  }
  if (!(h.EffectiveTime() >= 0.0) || !std::isfinite(h.EffectiveTime())) {
    return absl::OutOfRangeError("horizon must be nonnegative and finite");
  }
  return absl::OkStatus();
}

absl::StatusOr<AccountingResult> Finish(const AccountingParams& p,
                                        const Horizon& h, NoiseMode mode,
                                        double drive, double contraction,
                                        double uniform_argument) {
  AccountingResult out;
  out.mode = mode;
  out.drive = drive;
  out.contraction = contraction;
  out.time = h.EffectiveTime();
  absl::StatusOr<EnvelopeBound> env = SolveEnvelope(
      EnvelopeParams{drive, contraction, p.initial_divergence}, out.time);
  if (!env.ok()) return env.status();
  out.linear_value = env->linear;
  if (drive < contraction) {
    // Same number as log(a / (a - K_n)), written the way the bounds are
    // usually quoted.
    out.uniform_value = -std::log1p(-uniform_argument);
  }
  out.guarantee = RdpGuarantee{p.beta, env->value, env->regime};
  return out;
}

}  // namespace

std::string_view NoiseModeName(NoiseMode mode) {
  return mode == NoiseMode::kMultifractal ? "multifractal" : "pure-jump";
}

absl::StatusOr<NoiseMode> ClassifyNoise(const NoiseSpec& noise) {
  if (!(noise.sigma_alpha >= 0.0) || !(noise.sigma_2 >= 0.0)) {
    return absl::OutOfRangeError("noise scales must be nonnegative");
  }
  if (noise.sigma_2 > 0.0) return NoiseMode::kMultifractal;
  if (noise.sigma_alpha > 0.0) return NoiseMode::kPureJump;
  return absl::OutOfRangeError("sigma_alpha and sigma_2 cannot both be zero");
}

absl::StatusOr<AccountingResult> MultifractalBound(const AccountingParams& p,
                                                   const Horizon& h) {
  if (absl::Status s = ValidateCommon(p, h); !s.ok()) return s;
  if (!(p.noise.sigma_2 > 0.0)) {
    return absl::OutOfRangeError(
        "multifractal bound requires sigma_2 > 0");
  }
  const double n2 = static_cast<double>(p.n) * static_cast<double>(p.n);
  const double s2 = p.sensitivity * p.sensitivity;
  const double var2 = p.noise.sigma_2 * p.noise.sigma_2;
  const double drive = p.beta * s2 / (2.0 * var2 * n2);
  const double contraction = 1.0 / (p.gamma * p.beta);
  const double uniform_argument =
      p.gamma * s2 * p.beta * p.beta / (2.0 * var2 * n2);
  return Finish(p, h, NoiseMode::kMultifractal, drive, contraction,
                uniform_argument);
}

absl::StatusOr<AccountingResult> PureJumpBound(const AccountingParams& p,
                                               const Horizon& h) {
  if (absl::Status s = ValidateCommon(p, h); !s.ok()) return s;
  if (p.noise.sigma_2 != 0.0) {
    return absl::OutOfRangeError("pure-jump bound requires sigma_2 = 0");
  }
  if (!(p.noise.sigma_alpha > 0.0)) {
    return absl::OutOfRangeError("pure-jump bound requires sigma_alpha > 0");
  }
  if (absl::Status s = ValidateAccountantIndex(p.noise.alpha); !s.ok()) {
    return s;
  }
  absl::StatusOr<double> k_ad = PureJumpConstant(p.noise.alpha, p.d, p.radius);
  if (!k_ad.ok()) return k_ad.status();
  const double n2 = static_cast<double>(p.n) * static_cast<double>(p.n);
  const double s2 = p.sensitivity * p.sensitivity;
  const double scale = std::pow(p.noise.sigma_alpha, p.noise.alpha);
  const double drive = *k_ad * (p.beta - 1.0) * s2 / (scale * n2);
  const double contraction = 1.0 / (2.0 * p.gamma * (p.beta - 1.0));
  const double uniform_argument = 2.0 * p.gamma * (p.beta - 1.0) *
                                  (p.beta - 1.0) * *k_ad * s2 / (scale * n2);
  absl::StatusOr<AccountingResult> out =
      Finish(p, h, NoiseMode::kPureJump, drive, contraction, uniform_argument);
  if (out.ok()) out->dimension_constant = *k_ad;
  return out;
}

absl::StatusOr<AccountingResult> ComputeBound(const AccountingParams& p,
                                              const Horizon& h) {
  absl::StatusOr<NoiseMode> mode = ClassifyNoise(p.noise);
  if (!mode.ok()) return mode.status();
  return *mode == NoiseMode::kMultifractal ? MultifractalBound(p, h)
                                           : PureJumpBound(p, h);
}

absl::StatusOr<double> ZeroDeltaReport(const AccountingParams& p,
                                       const Horizon& h) {
  absl::StatusOr<AccountingResult> r = ComputeBound(p, h);
  if (!r.ok()) return r.status();
  return RdpToZeroDelta(r->guarantee);
}

absl::StatusOr<SweepAxis> ParseSweepAxis(std::string_view name) {
  if (name == "alpha") return SweepAxis::kAlpha;
  if (name == "d") return SweepAxis::kDimension;
  if (name == "n") return SweepAxis::kSampleSize;
  if (name == "beta") return SweepAxis::kBeta;
  if (name == "sigma") return SweepAxis::kSigma;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown sweep axis '", std::string(name), "' (expected alpha, d, n, beta, sigma)"));
}

std::string_view SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kAlpha:
      return "alpha";
    case SweepAxis::kDimension:
      return "d";
    case SweepAxis::kSampleSize:
      return "n";
    case SweepAxis::kBeta:
      return "beta";
    case SweepAxis::kSigma:
      return "sigma";
  }
  return "unknown";
}

absl::StatusOr<std::vector<SweepRow>> Sweep(const AccountingParams& base,
                                            const Horizon& h, SweepAxis axis,
                                            std::span<const double> values,
                                            std::span<const double> beta_grid,
                                            double delta) {
  if (values.empty()) {
    return absl::InvalidArgumentError("sweep needs at least one value");
  }
  if (!(delta > 0.0 && delta <= 1.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("delta must lie in (0, 1], got ", delta));
  }
  // Mode is fixed by the base configuration so a sigma sweep through zero
  // does not silently switch theorems.
  absl::StatusOr<NoiseMode> mode = ClassifyNoise(base.noise);
  if (!mode.ok()) return mode.status();

  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double value : values) {
    AccountingParams p = base;
    SweepRow row;
    row.value = value;
    switch (axis) {
      case SweepAxis::kAlpha:
        p.noise.alpha = value;
        break;
      case SweepAxis::kDimension:
        p.d = static_cast<int>(std::llround(value));
        break;
      case SweepAxis::kSampleSize:
        p.n = static_cast<int64_t>(std::llround(value));
        break;
      case SweepAxis::kBeta:
        p.beta = value;
        break;
      case SweepAxis::kSigma:
        if (*mode == NoiseMode::kMultifractal) {
          p.noise.sigma_2 = value;
        } else {
          p.noise.sigma_alpha = value;
        }
        break;
    }
    auto bound_at = [&](double beta) -> absl::StatusOr<AccountingResult> {
      AccountingParams q = p;
      q.beta = beta;
      return *mode == NoiseMode::kMultifractal ? MultifractalBound(q, h)
                                               : PureJumpBound(q, h);
    };

    double beta = p.beta;
    if (axis != SweepAxis::kBeta && !beta_grid.empty()) {
      absl::StatusOr<BetaChoice> best = OptimizeBeta(
          [&](double b) -> absl::StatusOr<RdpGuarantee> {
            absl::StatusOr<AccountingResult> r = bound_at(b);
            if (!r.ok()) return r.status();
            return r->guarantee;
          },
          beta_grid, delta);
      if (!best.ok()) {
        row.error = std::string(best.status().message());
        rows.push_back(row);
        continue;
      }
      beta = best->guarantee.beta;
    }
    absl::StatusOr<AccountingResult> r = bound_at(beta);
    if (!r.ok()) {
      row.error = std::string(r.status().message());
      rows.push_back(row);
      continue;
    }
    absl::StatusOr<double> eps = RdpToEpsilonDelta(r->guarantee, delta);
    absl::StatusOr<double> zero = RdpToZeroDelta(r->guarantee);
    if (!eps.ok() || !zero.ok()) {
      row.error = std::string(
          (!eps.ok() ? eps.status() : zero.status()).message());
      rows.push_back(row);
      continue;
    }
    row.valid = true;
    row.beta = beta;
    row.kappa = r->guarantee.kappa;
    row.regime = r->guarantee.regime;
    row.drive = r->drive;
    row.epsilon = *eps;
    row.zero_delta = *zero;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace levydp
