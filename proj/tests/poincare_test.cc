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

#include "gtest/gtest.h"

namespace levydp {
namespace {

ConvexProblem WorkedExample() {
  ConvexProblem p;
  p.lambda = 0.9;
  p.smoothness = 1.0;
  p.alpha = 1.5;
  p.d = 2;
  p.sigma = 1.0;
  p.eta = 0.851851851851851852;
  return p;
}

TEST(ConstantsTest, ConvolveAdds) {
  EXPECT_EQ(Convolve({1.0, 2.0}, {0.5, 0.25}), (PoincareConstants{1.5, 2.25}));
}

TEST(ConstantsTest, PushforwardScaling) {
  absl::StatusOr<PoincareConstants> c =
      PushforwardBiLipschitz({1.0, 1.0}, 0.5, 2.0, 1.5, 2);
  ASSERT_TRUE(c.ok());
  EXPECT_NEAR(c->frac, std::pow(2.0, 3.5) / 0.25, 1e-12);
  EXPECT_NEAR(c->gauss, 4.0, 1e-15);
  EXPECT_FALSE(PushforwardBiLipschitz({1.0, 1.0}, 2.0, 1.0, 1.5, 2).ok());
  EXPECT_FALSE(PushforwardBiLipschitz({1.0, 1.0}, 0.0, 1.0, 1.5, 2).ok());
}

TEST(ConstantsTest, PerturbBounded) {
  absl::StatusOr<PoincareConstants> c = PerturbBounded({1.0, 2.0}, 0.5);
  ASSERT_TRUE(c.ok());
  EXPECT_NEAR(c->frac, std::exp(1.0), 1e-15);
  EXPECT_NEAR(c->gauss, 2.0 * std::exp(1.0), 1e-15);
  EXPECT_FALSE(PerturbBounded({1.0, 2.0}, -0.5).ok());
  EXPECT_FALSE(PerturbBounded({-1.0, 2.0}, 0.5).ok());
}

TEST(TrackSgdTest, WorkedExample) {
  absl::StatusOr<TrackResult> r = TrackSgd(WorkedExample(), 0.0, 0);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_TRUE(r->admissible);
  EXPECT_NEAR(r->condition_value, 1.575, 1e-15);
  EXPECT_NEAR(r->eta0, 0.851851851851851852, 1e-15);
  EXPECT_NEAR(r->factor_at_eta0, 0.279593000096792480, 1e-13);
  EXPECT_NEAR(r->c0, 1.18245915429237224, 1e-12);
}

TEST(TrackSgdTest, FixedPointIsRetained) {
  const ConvexProblem p = WorkedExample();
  const double c0 = TrackSgd(p, 0.0, 0).value().c0;
  absl::StatusOr<TrackResult> r = TrackSgd(p, c0, 1000);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->constants.frac, c0, 1e-12);
  EXPECT_TRUE(r->bounded_by_c0);
}

TEST(TrackSgdTest, ConvergesToFixedPointFromZero) {
  const ConvexProblem p = WorkedExample();
  absl::StatusOr<TrackResult> r = TrackSgd(p, 0.0, 200);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->constants.frac, r->c0, 1e-12);
  EXPECT_LE(r->constants.frac, r->c0 + 1e-12);
}

TEST(TrackSgdTest, InadmissibleConditionIsReported) {
  ConvexProblem p = WorkedExample();
  p.lambda = 0.5;
  p.eta = 0.5;
  absl::StatusOr<TrackResult> r = TrackSgd(p, 0.0, 10);
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->admissible);
  EXPECT_NEAR(r->condition_value, 0.875, 1e-15);
  EXPECT_EQ(r->c0, 0.0);
  EXPECT_FALSE(r->bounded_by_c0);
}

TEST(TrackSgdTest, RejectsInvalidProblems) {
  ConvexProblem p = WorkedExample();
  p.lambda = 2.0;
  EXPECT_FALSE(TrackSgd(p, 0.0, 1).ok());
  p = WorkedExample();
  p.eta = 1.0;
  EXPECT_FALSE(TrackSgd(p, 0.0, 1).ok());
  p = WorkedExample();
  p.sigma = 0.0;
  EXPECT_FALSE(TrackSgd(p, 0.0, 1).ok());
  EXPECT_FALSE(TrackSgd(WorkedExample(), -1.0, 1).ok());
  EXPECT_FALSE(TrackSgd(WorkedExample(), 0.0, -1).ok());
}

TEST(TrackSgdTest, TailIndexExponentDiffers) {
  const ConvexProblem p = WorkedExample();
  const double dim = TrackSgd(p, 0.0, 0).value().factor;
  const double tail =
      TrackSgd(p, 0.0, 0, ContractionExponent::kTailIndex).value().factor;
  EXPECT_NE(dim, tail);
}

TEST(SgdStepTest, MatchesOneTrackerStep) {
  const ConvexProblem p = WorkedExample();
  for (double gamma0 : {0.0, 0.3, 1.0, 5.0}) {
    absl::StatusOr<PoincareConstants> step = SgdStep(p, {gamma0, 0.0});
    ASSERT_TRUE(step.ok());
    EXPECT_DOUBLE_EQ(step->frac, TrackSgd(p, gamma0, 1).value().constants.frac);
    EXPECT_EQ(step->gauss, 0.0);
  }
}

}  // namespace
}  // namespace levydp
