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

#ifndef LEVYDP_ACCOUNTANT_H_
#define LEVYDP_ACCOUNTANT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "levydp/privacy_core.h"

namespace levydp {

// Driving noise sigma_alpha dL^alpha + sigma_2 sqrt(2) dB.
struct NoiseSpec {
  double alpha = 1.5;
  double sigma_alpha = 1.0;
  double sigma_2 = 0.0;
};

enum class NoiseMode { kMultifractal, kPureJump };

std::string_view NoiseModeName(NoiseMode mode);

// Multifractal when sigma_2 > 0, pure jump when sigma_2 == 0 and
// sigma_alpha > 0. Both scales zero is an error.
absl::StatusOr<NoiseMode> ClassifyNoise(const NoiseSpec& noise);

struct AccountingParams {
  int64_t n = 1;               // dataset size
  int d = 1;                   // parameter dimension
  double beta = 2.0;           // Renyi order, >= 2
  double sensitivity = 0.0;    // gradient sensitivity S_g (or S_{g,C})
  double gamma = 1.0;          // Poincare ratio
  double radius = 1.0;         // R of the pure-jump bound
  NoiseSpec noise;
  // Expert override: divergence at time 0. Zero when both runs start from
  // the same distribution, which is the only case the theorems cover.
  double initial_divergence = 0.0;
};

// Continuous time t, or k steps of size eta (effective time k * eta).
struct Horizon {
  enum class Kind { kContinuous, kDiscrete };
  Kind kind = Kind::kContinuous;
  double t = 0.0;
  int64_t k = 0;
  double eta = 1.0;

  static Horizon Continuous(double t) { return {Kind::kContinuous, t, 0, 1.0}; }
  static Horizon Discrete(int64_t k, double eta) {
    return {Kind::kDiscrete, 0.0, k, eta};
  }
  double EffectiveTime() const {
    return kind == Kind::kContinuous ? t : static_cast<double>(k) * eta;
  }
};

struct AccountingResult {
  RdpGuarantee guarantee;
  NoiseMode mode = NoiseMode::kMultifractal;
  double drive = 0.0;        // K_n
  double contraction = 0.0;  // a
  double time = 0.0;
  double linear_value = 0.0;
  // -log(1 - ...) closed form, present when K_n < a.
  std::optional<double> uniform_value;
  // K_{alpha,d}; pure-jump only.
  std::optional<double> dimension_constant;
};

// K_n = beta S^2 / (2 sigma_2^2 n^2), a = 1 / (gamma beta).
absl::StatusOr<AccountingResult> MultifractalBound(const AccountingParams& p,
                                                   const Horizon& h);

// K_n = K_{alpha,d} (beta-1) S^2 / (sigma_alpha^alpha n^2),
// a = 1 / (2 gamma (beta-1)). Only valid on [0, T] with T the queried
// horizon; the answer is conditional on the chosen R.
absl::StatusOr<AccountingResult> PureJumpBound(const AccountingParams& p,
                                               const Horizon& h);

// Dispatches on the noise mode.
absl::StatusOr<AccountingResult> ComputeBound(const AccountingParams& p,
                                              const Horizon& h);

// (0, delta)-DP from the selected bound.
absl::StatusOr<double> ZeroDeltaReport(const AccountingParams& p,
                                       const Horizon& h);

enum class SweepAxis { kAlpha, kDimension, kSampleSize, kBeta, kSigma };

absl::StatusOr<SweepAxis> ParseSweepAxis(std::string_view name);
std::string_view SweepAxisName(SweepAxis axis);

struct SweepRow {
  double value = 0.0;
  bool valid = false;
  std::string error;  // set when !valid
  double beta = 0.0;
  double kappa = 0.0;
  Regime regime = Regime::kLinear;
  double drive = 0.0;
  double epsilon = 0.0;
  double zero_delta = 0.0;
};

// One row per value. For every axis other than kBeta a nonempty beta_grid
// selects the beta minimizing epsilon(delta). kSigma sweeps sigma_2 in
// multifractal mode and sigma_alpha in pure-jump mode. Invalid
// configurations produce rows with valid == false.
absl::StatusOr<std::vector<SweepRow>> Sweep(const AccountingParams& base,
                                            const Horizon& h, SweepAxis axis,
                                            std::span<const double> values,
                                            std::span<const double> beta_grid,
                                            double delta);

}  // namespace levydp

#endif  // LEVYDP_ACCOUNTANT_H_
