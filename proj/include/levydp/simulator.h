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

#ifndef LEVYDP_SIMULATOR_H_
#define LEVYDP_SIMULATOR_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "levydp/accountant.h"

namespace levydp {

using Point = std::vector<double>;

// Per-sample losses.
//  kQuadratic:           l(w, z) = |w - z|^2 / 2, z in R^d.
//  kRegularizedLogistic: z = (x, y) with x in R^d and label y = +-1 stored
//                        last; l = log(1 + exp(-y <w, x>)) + ridge |w|^2.
//  kClippedGradient:     gradient of `inner` (quadratic or logistic)
//                        rescaled to norm <= clip_radius.
enum class LossFamily { kQuadratic, kRegularizedLogistic, kClippedGradient };

absl::StatusOr<LossFamily> ParseLossFamily(std::string_view name);
std::string_view LossFamilyName(LossFamily family);

struct LossSpec {
  LossFamily family = LossFamily::kQuadratic;
  LossFamily inner = LossFamily::kQuadratic;  // kClippedGradient only
  double ridge = 0.0;
  double clip_radius = 1.0;
};

absl::Status ValidateLoss(const LossSpec& loss);

// Data dimension for a parameter dimension d (logistic points carry a label).
int PointDimension(const LossSpec& loss, int d);

// Adds weight * grad_w l(w, z) to `out`.
void AccumulateGradient(const LossSpec& loss, std::span<const double> w,
                        std::span<const double> z, double weight,
                        std::span<double> out);

struct Dataset {
  std::vector<Point> points;
  // Norm bound on data points (features only for logistic data), if known.
  std::optional<double> bound;
};

struct NeighborPair {
  Dataset s;
  Dataset s_prime;
  std::size_t differing_index = 0;
};

// Builds S' from S by replacing point `index`. Checks lengths and
// dimensions; the optional bound is checked by the runs, which know which
// coordinates are features.
absl::StatusOr<NeighborPair> MakeNeighborPair(const Dataset& s,
                                              std::size_t index,
                                              const Point& replacement);

absl::Status ValidateNeighborPair(const NeighborPair& pair);

// Upper bound on sup_w |grad l(w, z) - grad l(w, z')| over data within
// `data_bound` and parameters within `region_radius` (may be infinite).
// Quadratic: 2 r. Clipped: 2 C. Logistic with |x| <= B: 2 B.
absl::StatusOr<double> GradientSensitivity(
    const LossSpec& loss,
    double region_radius = std::numeric_limits<double>::infinity(),
    std::optional<double> data_bound = std::nullopt);

struct InitialDistribution {
  enum class Kind { kPointMass, kGaussian };
  Kind kind = Kind::kPointMass;
  Point center;        // w0 (mean for kGaussian); empty means the origin
  double scale = 1.0;  // kGaussian standard deviation
};

struct SimulationConfig {
  LossSpec loss;
  NoiseSpec noise;
  double eta = 0.1;
  int64_t steps = 100;
  int64_t batch = 1;
  std::optional<double> projection_radius;
  InitialDistribution init;
  uint64_t seed = 0;
};

// Scaled noise increments applied at one step, shared by both runs:
// sigma_alpha eta^(1/alpha) xi_k and sigma_2 sqrt(2 eta) zeta_k. A vector is
// empty when the corresponding scale is zero.
struct StepNoise {
  std::vector<double> stable;
  std::vector<double> gaussian;

  friend bool operator==(const StepNoise&, const StepNoise&) = default;
};

struct Truncation {
  int64_t step = 0;  // index of the step that produced a non-finite iterate
  double jump_magnitude = 0.0;
  std::string message;
};

struct TrajectoryPair {
  std::vector<Point> w;        // X_0 .. X_K
  std::vector<Point> w_prime;  // X'_0 .. X'_K
  std::vector<StepNoise> noise_log;
  std::vector<std::vector<std::size_t>> batch_log;
  std::optional<Truncation> truncation;
};

// Runs X_{k+1} = Pi(X_k - eta g_S(X_k, B_k) + noise_k) and the same with S',
// with shared noise, shared batches B_k (uniform size-b subsets, i.i.d.
// across steps) and a shared initial draw. The stream is SplitSeed(seed, 0).
// A non-finite iterate stops the run and fills `truncation`.
absl::StatusOr<TrajectoryPair> RunPair(const NeighborPair& pair,
                                       const SimulationConfig& config);

struct Ensemble {
  int d = 0;
  std::vector<int64_t> checkpoints;
  int64_t trajectories = 0;
  // [checkpoint][trajectory * d + coordinate]
  std::vector<std::vector<double>> s;
  std::vector<std::vector<double>> s_prime;

  // Coordinate `coord` of every trajectory at checkpoint index `c`.
  std::vector<double> Marginal(std::size_t c, bool prime, int coord = 0) const;
};

// Independent trajectory pairs; pair i uses stream SplitSeed(seed, i), so
// trajectory 0 reproduces RunPair. Runs in parallel; output does not depend
// on the worker count. Any truncated trajectory fails the whole ensemble.
absl::StatusOr<Ensemble> RunEnsemble(const NeighborPair& pair,
                                     const SimulationConfig& config,
                                     std::span<const int64_t> checkpoints,
                                     int64_t trajectories);

// CSV with columns trajectory_id, step, which (S or Sprime), w_1..w_d.
void WriteEnsembleCsv(const Ensemble& ensemble, std::ostream& out);

// Dataset of n points drawn uniformly from the ball of radius `radius` in
// R^d (quadratic data); deterministic in `seed`.
Dataset SyntheticBallDataset(int64_t n, int d, double radius, uint64_t seed);

}  // namespace levydp

#endif  // LEVYDP_SIMULATOR_H_
