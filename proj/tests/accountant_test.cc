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
#include <vector>

#include "gtest/gtest.h"
#include "levydp/constants.h"
#include "levydp/stable_noise.h"

namespace levydp {
namespace {

AccountingParams MultifractalExample() {
  AccountingParams p;
  p.n = 10;
  p.beta = 2.0;
  p.sensitivity = 1.0;
  p.gamma = 1.0;
  p.noise = {1.5, 0.0, 1.0};
  return p;
}

AccountingParams PureJumpExample() {
  AccountingParams p;
  p.n = 100;
  p.d = 2;
  p.beta = 2.0;
  p.sensitivity = 1.0;
  p.gamma = 1.0;
  p.radius = 1.0;
  p.noise = {1.5, 1.0, 0.0};
  return p;
}

TEST(ClassifyNoiseTest, Modes) {
  EXPECT_EQ(ClassifyNoise({1.5, 1.0, 0.5}).value(), NoiseMode::kMultifractal);
  EXPECT_EQ(ClassifyNoise({1.5, 0.0, 0.5}).value(), NoiseMode::kMultifractal);
  EXPECT_EQ(ClassifyNoise({1.5, 1.0, 0.0}).value(), NoiseMode::kPureJump);
  EXPECT_FALSE(ClassifyNoise({1.5, 0.0, 0.0}).ok());
  EXPECT_FALSE(ClassifyNoise({1.5, -1.0, 0.0}).ok());
}

TEST(MultifractalTest, WorkedExample) {
  absl::StatusOr<AccountingResult> r =
      MultifractalBound(MultifractalExample(), Horizon::Continuous(100.0));
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_DOUBLE_EQ(r->drive, 0.01);
  EXPECT_DOUBLE_EQ(r->contraction, 0.5);
  EXPECT_EQ(r->guarantee.regime, Regime::kTimeUniform);
  EXPECT_NEAR(r->guarantee.kappa, 0.020202707317519448, 1e-15);
  ASSERT_TRUE(r->uniform_value.has_value());
  EXPECT_NEAR(*r->uniform_value, std::log(0.5 / 0.49), 1e-15);
  EXPECT_DOUBLE_EQ(r->linear_value, 1.0);
  EXPECT_FALSE(r->dimension_constant.has_value());
}

TEST(MultifractalTest, ZeroSensitivityGivesZero) {
  AccountingParams p = MultifractalExample();
  p.sensitivity = 0.0;
  absl::StatusOr<AccountingResult> r =
      MultifractalBound(p, Horizon::Continuous(50.0));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->guarantee.kappa, 0.0);
}

TEST(MultifractalTest, RequiresGaussianPart) {
  AccountingParams p = MultifractalExample();
  p.noise.sigma_2 = 0.0;
  EXPECT_FALSE(MultifractalBound(p, Horizon::Continuous(1.0)).ok());
}

TEST(MultifractalTest, LinearRegimeWhenDriveLarge) {
  AccountingParams p = MultifractalExample();
  p.n = 1;
  absl::StatusOr<AccountingResult> r =
      MultifractalBound(p, Horizon::Continuous(3.0));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->guarantee.regime, Regime::kLinear);
  EXPECT_DOUBLE_EQ(r->guarantee.kappa, 3.0);
  EXPECT_FALSE(r->uniform_value.has_value());
}

TEST(PureJumpTest, WorkedExample) {
  absl::StatusOr<AccountingResult> r =
      PureJumpBound(PureJumpExample(), Horizon::Continuous(1.0));
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_NEAR(*r->dimension_constant, 3.71928753796658364, 1e-12);
  EXPECT_NEAR(r->drive, 3.71928753796658364e-4, 1e-16);
  EXPECT_DOUBLE_EQ(r->contraction, 0.5);
  EXPECT_NEAR(r->linear_value, 3.71928753796658364e-4, 1e-16);
  ASSERT_TRUE(r->uniform_value.has_value());
  EXPECT_NEAR(*r->uniform_value, 7.44134306863774e-4, 1e-15);
  EXPECT_NEAR(r->guarantee.kappa, 3.71928753796658364e-4, 1e-16);
  EXPECT_EQ(r->mode, NoiseMode::kPureJump);
}

TEST(PureJumpTest, RejectsBadIndexAndGaussianPart) {
  AccountingParams p = PureJumpExample();
  p.noise.alpha = 1.0;
  EXPECT_FALSE(PureJumpBound(p, Horizon::Continuous(1.0)).ok());
  p = PureJumpExample();
  p.noise.sigma_2 = 0.5;
  EXPECT_FALSE(PureJumpBound(p, Horizon::Continuous(1.0)).ok());
}

TEST(PureJumpTest, DoublingSampleSizeHalvesDelta) {
  AccountingParams p = PureJumpExample();
  p.n = 1000;
  const Horizon h = Horizon::Continuous(100.0);
  const double small_n = ZeroDeltaReport(p, h).value();
  p.n = 2000;
  const double large_n = ZeroDeltaReport(p, h).value();
  EXPECT_NEAR(large_n / small_n, 0.5, 1e-3);
}

TEST(HorizonTest, DiscreteEqualsContinuous) {
  for (const AccountingParams& p : {MultifractalExample(), PureJumpExample()}) {
    absl::StatusOr<AccountingResult> discrete =
        ComputeBound(p, Horizon::Discrete(250, 0.2));
    absl::StatusOr<AccountingResult> continuous =
        ComputeBound(p, Horizon::Continuous(50.0));
    ASSERT_TRUE(discrete.ok());
    ASSERT_TRUE(continuous.ok());
    EXPECT_DOUBLE_EQ(discrete->guarantee.kappa, continuous->guarantee.kappa);
    EXPECT_EQ(discrete->guarantee.regime, continuous->guarantee.regime);
  }
}

TEST(HorizonTest, RejectsNegativeValues) {
  EXPECT_FALSE(ComputeBound(MultifractalExample(), Horizon::Continuous(-1.0)).ok());
  EXPECT_FALSE(ComputeBound(MultifractalExample(), Horizon::Discrete(-1, 0.1)).ok());
  EXPECT_FALSE(ComputeBound(MultifractalExample(), Horizon::Discrete(10, 0.0)).ok());
}

TEST(AccountantTest, RejectsInvalidParameters) {
  AccountingParams p = MultifractalExample();
  p.beta = 1.5;
  EXPECT_FALSE(ComputeBound(p, Horizon::Continuous(1.0)).ok());
  p = MultifractalExample();
  p.n = 0;
  EXPECT_FALSE(ComputeBound(p, Horizon::Continuous(1.0)).ok());
  p = MultifractalExample();
  p.gamma = 0.0;
  EXPECT_FALSE(ComputeBound(p, Horizon::Continuous(1.0)).ok());
}

TEST(AccountantTest, RandomParametersAreConsistent) {
  NoiseStream rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    AccountingParams p;
    p.n = 1 + static_cast<int64_t>(rng.Below(1000));
    p.d = 1 + static_cast<int>(rng.Below(20));
    p.beta = 2.0 + 30.0 * rng.Uniform();
    p.sensitivity = 5.0 * rng.Uniform();
    p.gamma = 0.1 + 10.0 * rng.Uniform();
    p.radius = 0.1 + 3.0 * rng.Uniform();
    const bool multifractal = rng.Uniform() < 0.5;
    p.noise = {1.05 + 0.9 * rng.Uniform(), 0.1 + 2.0 * rng.Uniform(),
               multifractal ? 0.1 + 2.0 * rng.Uniform() : 0.0};
    const int64_t k = static_cast<int64_t>(rng.Below(5000));
    const double eta = 0.001 + rng.Uniform();
    absl::StatusOr<AccountingResult> r = ComputeBound(p, Horizon::Discrete(k, eta));
    ASSERT_TRUE(r.ok()) << r.status();
    EXPECT_EQ(r->guarantee.regime == Regime::kTimeUniform,
              r->drive < r->contraction);
    if (r->uniform_value.has_value()) {
      EXPECT_NEAR(*r->uniform_value,
                  std::log(r->contraction / (r->contraction - r->drive)), 1e-12);
    }
    absl::StatusOr<AccountingResult> c =
        ComputeBound(p, Horizon::Continuous(static_cast<double>(k) * eta));
    ASSERT_TRUE(c.ok());
    EXPECT_EQ(r->guarantee.kappa, c->guarantee.kappa);
  }
}

TEST(AccountantTest, KappaNondecreasingInTime) {
  AccountingParams p = MultifractalExample();
  double previous = 0.0;
  for (double t = 0.0; t <= 200.0; t += 5.0) {
    const double kappa =
        ComputeBound(p, Horizon::Continuous(t)).value().guarantee.kappa;
    EXPECT_GE(kappa, previous);
    previous = kappa;
  }
}

TEST(SweepTest, ParseAxis) {
  EXPECT_EQ(ParseSweepAxis("n").value(), SweepAxis::kSampleSize);
  EXPECT_EQ(ParseSweepAxis("d").value(), SweepAxis::kDimension);
  EXPECT_EQ(SweepAxisName(SweepAxis::kSigma), "sigma");
  EXPECT_FALSE(ParseSweepAxis("lambda").ok());
}

TEST(SweepTest, SingleValueMatchesDirectCall) {
  const AccountingParams p = MultifractalExample();
  const Horizon h = Horizon::Continuous(100.0);
  const std::vector<double> values = {10.0};
  absl::StatusOr<std::vector<SweepRow>> rows =
      Sweep(p, h, SweepAxis::kSampleSize, values, {}, 0.01);
  ASSERT_TRUE(rows.ok()) << rows.status();
  ASSERT_EQ(rows->size(), 1u);
  const AccountingResult direct = ComputeBound(p, h).value();
  EXPECT_TRUE((*rows)[0].valid);
  EXPECT_EQ((*rows)[0].kappa, direct.guarantee.kappa);
  EXPECT_NEAR((*rows)[0].epsilon, direct.guarantee.kappa + std::log(100.0),
              1e-12);
}

TEST(SweepTest, SampleSizeIsMonotone) {
  const std::vector<double> values = {10, 20, 50, 100, 1000};
  absl::StatusOr<std::vector<SweepRow>> rows =
      Sweep(MultifractalExample(), Horizon::Continuous(100.0),
            SweepAxis::kSampleSize, values, {}, 1e-5);
  ASSERT_TRUE(rows.ok());
  for (std::size_t i = 1; i < rows->size(); ++i) {
    EXPECT_LT((*rows)[i].kappa, (*rows)[i - 1].kappa);
  }
}

TEST(SweepTest, AlphaAxisUsesDimensionConstant) {
  const std::vector<double> values = {1.2, 1.5, 1.8};
  absl::StatusOr<std::vector<SweepRow>> rows =
      Sweep(PureJumpExample(), Horizon::Continuous(1.0), SweepAxis::kAlpha,
            values, {}, 1e-5);
  ASSERT_TRUE(rows.ok());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double k_ad = PureJumpConstant(values[i], 2, 1.0).value();
    EXPECT_NEAR((*rows)[i].drive, k_ad * 1e-4, 1e-15);
  }
}

TEST(SweepTest, InvalidValuesAreMarked) {
  const std::vector<double> values = {0.9, 1.5};
  absl::StatusOr<std::vector<SweepRow>> rows =
      Sweep(PureJumpExample(), Horizon::Continuous(1.0), SweepAxis::kAlpha,
            values, {}, 1e-5);
  ASSERT_TRUE(rows.ok());
  EXPECT_FALSE((*rows)[0].valid);
  EXPECT_FALSE((*rows)[0].error.empty());
  EXPECT_TRUE((*rows)[1].valid);
}

TEST(SweepTest, BetaGridSelectsBest) {
  const std::vector<double> values = {100.0};
  const std::vector<double> grid = {2, 4, 8, 16, 32};
  absl::StatusOr<std::vector<SweepRow>> rows =
      Sweep(MultifractalExample(), Horizon::Continuous(100.0),
            SweepAxis::kSampleSize, values, grid, 1e-5);
  ASSERT_TRUE(rows.ok());
  AccountingParams p = MultifractalExample();
  p.n = 100;
  for (double beta : grid) {
    p.beta = beta;
    const RdpGuarantee g =
        ComputeBound(p, Horizon::Continuous(100.0)).value().guarantee;
    EXPECT_LE((*rows)[0].epsilon, RdpToEpsilonDelta(g, 1e-5).value() + 1e-12);
  }
}

TEST(SweepTest, DimensionSlope) {
  AccountingParams p = PureJumpExample();
  p.n = 10000;
  const std::vector<double> values = {8, 16, 32, 64};
  absl::StatusOr<std::vector<SweepRow>> rows = Sweep(
      p, Horizon::Continuous(1.0), SweepAxis::kDimension, values, {}, 1e-5);
  ASSERT_TRUE(rows.ok());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ASSERT_TRUE((*rows)[i].valid);
    ASSERT_LT((*rows)[i].zero_delta, 1.0);
    const double x = std::log(values[i]);
    const double y = std::log((*rows)[i].zero_delta);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(values.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  EXPECT_NEAR(slope, 0.125, 0.125 * 0.15);
}

}  // namespace
}  // namespace levydp
