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

#include "levydp/simulator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "levydp/constants.h"
#include "levydp/csv.h"
#include "levydp/parallel.h"
#include "levydp/stable_noise.h"

namespace levydp {
namespace {

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Feature part of a point (drops the label for logistic data).
std::span<const double> Features(const LossSpec& loss,
                                 std::span<const double> z) {
  const bool logistic =
      loss.family == LossFamily::kRegularizedLogistic ||
      (loss.family == LossFamily::kClippedGradient &&
       loss.inner == LossFamily::kRegularizedLogistic);
  return logistic ? z.first(z.size() - 1) : z;
}

void RawGradient(LossFamily family, double ridge, std::span<const double> w,
                 std::span<const double> z, std::span<double> g) {
  const std::size_t d = w.size();
  if (family == LossFamily::kQuadratic) {
    for (std::size_t i = 0; i < d; ++i) g[i] = w[i] - z[i];
    return;
  }
  // Logistic: -y x sigmoid(-y <w, x>) + 2 ridge w.
  const double y = z[d];
  double margin = 0.0;
  for (std::size_t i = 0; i < d; ++i) margin += w[i] * z[i];
  margin *= y;
  const double s = 1.0 / (1.0 + std::exp(margin));
  for (std::size_t i = 0; i < d; ++i) {
    g[i] = -y * z[i] * s + 2.0 * ridge * w[i];
  }
}

void Project(std::optional<double> radius, std::span<double> w) {
  if (!radius.has_value()) return;
  const double norm = Norm(w);
  if (norm > *radius) {
    const double scale = *radius / norm;
    for (double& x : w) x *= scale;
  }
}

bool AllFinite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

struct Validated {
  int d = 0;
  std::size_t n = 0;
  double stable_scale = 0.0;    // sigma_alpha eta^(1/alpha)
  double gaussian_scale = 0.0;  // sigma_2 sqrt(2 eta)
  std::optional<IsotropicStableSampler> stable;
};

absl::StatusOr<Validated> ValidateRun(const NeighborPair& pair,
                                      const SimulationConfig& config) {
  if (absl::Status s = ValidateLoss(config.loss); !s.ok()) return s;
  if (absl::Status s = ValidateNeighborPair(pair); !s.ok()) return s;
  Validated v;
  v.n = pair.s.points.size();
  const int point_dim = static_cast<int>(pair.s.points.front().size());
  v.d = point_dim - (PointDimension(config.loss, 1) - 1);
  if (v.d < 1) return absl::InvalidArgumentError("data points are too short");
  for (const Dataset* data : {&pair.s, &pair.s_prime}) {
    if (!data->bound.has_value()) continue;
    for (std::size_t i = 0; i < data->points.size(); ++i) {
      if (Norm(Features(config.loss, data->points[i])) >
          *data->bound * (1.0 + 1e-12)) {
        return absl::OutOfRangeError(absl::StrCat(
            "data point ", i, " exceeds the declared bound ", *data->bound));
      }
    }
  }
  if (!(config.eta > 0.0) || !std::isfinite(config.eta)) {
    return absl::OutOfRangeError("step size eta must be positive");
  }
  if (config.steps < 0) return absl::OutOfRangeError("steps must be >= 0");
  if (config.batch < 1 || static_cast<std::size_t>(config.batch) > v.n) {
    return absl::OutOfRangeError(absl::StrCat(
        "batch must lie in [1, n] = [1, ", v.n, "], got ", config.batch));
  }
  if (!(config.noise.sigma_alpha >= 0.0) || !(config.noise.sigma_2 >= 0.0)) {
    return absl::OutOfRangeError("noise scales must be nonnegative");
  }
  if (config.noise.sigma_alpha > 0.0) {
    absl::StatusOr<IsotropicStableSampler> sampler =
        IsotropicStableSampler::Create(config.noise.alpha, v.d);
    if (!sampler.ok()) return sampler.status();
    v.stable = *sampler;
    v.stable_scale = config.noise.sigma_alpha *
                     std::pow(config.eta, 1.0 / config.noise.alpha);
  }
  v.gaussian_scale = config.noise.sigma_2 * std::sqrt(2.0 * config.eta);
  if (config.projection_radius.has_value() &&
      !(*config.projection_radius > 0.0)) {
    return absl::OutOfRangeError("projection radius must be positive");
  }
  if (!config.init.center.empty() &&
      static_cast<int>(config.init.center.size()) != v.d) {
    return absl::InvalidArgumentError(absl::StrCat(
        "initial point has dimension ", config.init.center.size(),
        ", expected ", v.d));
  }
  if (config.init.kind == InitialDistribution::Kind::kGaussian &&
      !(config.init.scale >= 0.0)) {
    return absl::OutOfRangeError("initial scale must be nonnegative");
  }
  return v;
}

// Receives the state after every step (and once for the initial draw with
// step == 0, noise == nullptr).
class Recorder {
 public:
  virtual ~Recorder() = default;
  virtual void Record(int64_t step, std::span<const double> w,
                      std::span<const double> w_prime, const StepNoise* noise,
                      std::span<const std::size_t> batch) = 0;
};

std::optional<Truncation> Simulate(const NeighborPair& pair,
                                   const SimulationConfig& config,
                                   const Validated& v, uint64_t stream_seed,
                                   int64_t steps, Recorder& recorder) {
  NoiseStream rng(stream_seed);
  const std::size_t d = static_cast<std::size_t>(v.d);
  std::vector<double> w(d, 0.0);
  if (!config.init.center.empty()) w = config.init.center;
  if (config.init.kind == InitialDistribution::Kind::kGaussian) {
    for (double& x : w) x += config.init.scale * rng.Gaussian();
  }
  Project(config.projection_radius, w);
  std::vector<double> w_prime = w;

  std::vector<std::size_t> order(v.n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t b = static_cast<std::size_t>(config.batch);
  const bool full_batch = b == v.n;

  StepNoise noise;
  if (v.stable.has_value()) noise.stable.resize(d);
  if (v.gaussian_scale > 0.0) noise.gaussian.resize(d);
  std::vector<double> g(d), g_prime(d);

  recorder.Record(0, w, w_prime, nullptr, {});
  for (int64_t k = 0; k < steps; ++k) {
    if (!full_batch) {
      // Partial Fisher-Yates: the first b entries form a uniform subset.
      for (std::size_t i = 0; i < b; ++i) {
        const std::size_t j = i + rng.Below(v.n - i);
        std::swap(order[i], order[j]);
      }
    }
    if (v.stable.has_value()) {
      v.stable->Sample(rng, noise.stable);
      for (double& x : noise.stable) x *= v.stable_scale;
    }
    for (double& x : noise.gaussian) x = v.gaussian_scale * rng.Gaussian();

    std::fill(g.begin(), g.end(), 0.0);
    std::fill(g_prime.begin(), g_prime.end(), 0.0);
    const double weight = 1.0 / static_cast<double>(b);
    for (std::size_t i = 0; i < b; ++i) {
      const std::size_t idx = order[i];
      AccumulateGradient(config.loss, w, pair.s.points[idx], weight, g);
      AccumulateGradient(config.loss, w_prime, pair.s_prime.points[idx],
                         weight, g_prime);
    }
    for (std::size_t i = 0; i < d; ++i) {
      double shared = 0.0;
      if (!noise.stable.empty()) shared += noise.stable[i];
      if (!noise.gaussian.empty()) shared += noise.gaussian[i];
      w[i] += -config.eta * g[i] + shared;
      w_prime[i] += -config.eta * g_prime[i] + shared;
    }
    Project(config.projection_radius, w);
    Project(config.projection_radius, w_prime);
    if (!AllFinite(w) || !AllFinite(w_prime)) {
      Truncation t;
      t.step = k;
      t.jump_magnitude = Norm(noise.stable);
      t.message = absl::StrFormat(
          "non-finite iterate at step %d (stable jump magnitude %g)", k,
          t.jump_magnitude);
      return t;
    }
    recorder.Record(k + 1, w, w_prime, &noise,
                    std::span<const std::size_t>(order).first(b));
  }
  return std::nullopt;
}

class FullRecorder : public Recorder {
 public:
  explicit FullRecorder(TrajectoryPair& out) : out_(out) {}
  void Record(int64_t, std::span<const double> w,
              std::span<const double> w_prime, const StepNoise* noise,
              std::span<const std::size_t> batch) override {
    out_.w.emplace_back(w.begin(), w.end());
    out_.w_prime.emplace_back(w_prime.begin(), w_prime.end());
    if (noise != nullptr) {
      out_.noise_log.push_back(*noise);
      out_.batch_log.emplace_back(batch.begin(), batch.end());
    }
  }

 private:
  TrajectoryPair& out_;
};

class CheckpointRecorder : public Recorder {
 public:
  CheckpointRecorder(Ensemble& out, std::size_t trajectory)
      : out_(out), trajectory_(trajectory) {}
  void Record(int64_t step, std::span<const double> w,
              std::span<const double> w_prime, const StepNoise*,
              std::span<const std::size_t>) override {
    while (next_ < out_.checkpoints.size() && out_.checkpoints[next_] < step) {
      ++next_;
    }
    if (next_ >= out_.checkpoints.size() || out_.checkpoints[next_] != step) {
      return;
    }
    const std::size_t d = static_cast<std::size_t>(out_.d);
    std::copy(w.begin(), w.end(), out_.s[next_].begin() + trajectory_ * d);
    std::copy(w_prime.begin(), w_prime.end(),
              out_.s_prime[next_].begin() + trajectory_ * d);
    ++next_;
  }

 private:
  Ensemble& out_;
  std::size_t trajectory_;
  std::size_t next_ = 0;
};

}  // namespace

absl::StatusOr<LossFamily> ParseLossFamily(std::string_view name) {
  if (name == "quadratic") return LossFamily::kQuadratic;
  if (name == "logistic") return LossFamily::kRegularizedLogistic;
  if (name == "clipped") return LossFamily::kClippedGradient;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown loss '", std::string(name), "' (expected quadratic, logistic, clipped)"));
}

std::string_view LossFamilyName(LossFamily family) {
  switch (family) {
    case LossFamily::kQuadratic:
      return "quadratic";
    case LossFamily::kRegularizedLogistic:
      return "logistic";
    case LossFamily::kClippedGradient:
      return "clipped";
  }
  return "unknown";
}

absl::Status ValidateLoss(const LossSpec& loss) {
  if (!(loss.ridge >= 0.0)) {
    return absl::OutOfRangeError("ridge coefficient must be >= 0");
  }
  if (loss.family == LossFamily::kClippedGradient) {
    if (!(loss.clip_radius > 0.0) || !std::isfinite(loss.clip_radius)) {
      return absl::OutOfRangeError(absl::StrCat(
          "clip radius must be positive, got ", loss.clip_radius));
    }
    if (loss.inner == LossFamily::kClippedGradient) {
      return absl::InvalidArgumentError("clipped loss cannot wrap itself");
    }
  }
  return absl::OkStatus();
}

int PointDimension(const LossSpec& loss, int d) {
  const bool logistic =
      loss.family == LossFamily::kRegularizedLogistic ||
      (loss.family == LossFamily::kClippedGradient &&
       loss.inner == LossFamily::kRegularizedLogistic);
  return logistic ? d + 1 : d;
}

void AccumulateGradient(const LossSpec& loss, std::span<const double> w,
                        std::span<const double> z, double weight,
                        std::span<double> out) {
  const std::size_t d = w.size();
  double buffer[8];
  std::vector<double> heap;
  std::span<double> g;
  if (d <= 8) {
    g = std::span<double>(buffer, d);
  } else {
    heap.resize(d);
    g = heap;
  }
  if (loss.family == LossFamily::kClippedGradient) {
    RawGradient(loss.inner, loss.ridge, w, z, g);
    const double norm = Norm(g);
    if (norm > loss.clip_radius) {
      const double scale = loss.clip_radius / norm;
      for (double& x : g) x *= scale;
    }
  } else {
    RawGradient(loss.family, loss.ridge, w, z, g);
  }
  for (std::size_t i = 0; i < d; ++i) out[i] += weight * g[i];
}

absl::StatusOr<NeighborPair> MakeNeighborPair(const Dataset& s,
                                              std::size_t index,
                                              const Point& replacement) {
  if (index >= s.points.size()) {
    return absl::OutOfRangeError(absl::StrCat(
        "differing index ", index, " outside dataset of size ",
        s.points.size()));
  }
  NeighborPair pair{s, s, index};
  pair.s_prime.points[index] = replacement;
  if (absl::Status st = ValidateNeighborPair(pair); !st.ok()) return st;
  return pair;
}

absl::Status ValidateNeighborPair(const NeighborPair& pair) {
  if (pair.s.points.empty()) {
    return absl::InvalidArgumentError("dataset must be nonempty");
  }
  if (pair.s.points.size() != pair.s_prime.points.size()) {
    return absl::InvalidArgumentError("neighboring datasets differ in size");
  }
  if (pair.differing_index >= pair.s.points.size()) {
    return absl::OutOfRangeError("differing index outside the dataset");
  }
  const std::size_t dim = pair.s.points.front().size();
  if (dim == 0) return absl::InvalidArgumentError("points must be nonempty");
  for (std::size_t i = 0; i < pair.s.points.size(); ++i) {
    const Point& a = pair.s.points[i];
    const Point& b = pair.s_prime.points[i];
    if (a.size() != dim || b.size() != dim) {
      return absl::InvalidArgumentError(
          absl::StrCat("point ", i, " has inconsistent dimension"));
    }
    if (i != pair.differing_index && a != b) {
      return absl::InvalidArgumentError(absl::StrCat(
          "datasets differ at index ", i, " besides the differing index ",
          pair.differing_index));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<double> GradientSensitivity(const LossSpec& loss,
                                           double region_radius,
                                           std::optional<double> data_bound) {
  if (absl::Status s = ValidateLoss(loss); !s.ok()) return s;
  if (!(region_radius > 0.0)) {
    return absl::OutOfRangeError("region radius must be positive");
  }
  switch (loss.family) {
    case LossFamily::kClippedGradient:
      return 2.0 * loss.clip_radius;
    case LossFamily::kQuadratic:
    case LossFamily::kRegularizedLogistic:
      if (!data_bound.has_value() || !(*data_bound >= 0.0) ||
          !std::isfinite(*data_bound)) {
        return absl::UnimplementedError(absl::StrCat(
            "no certified sensitivity for ", std::string(LossFamilyName(loss.family)),
            " loss without a finite data bound"));
      }
      // Quadratic: grad difference is z' - z. Logistic: the ridge term
      // cancels and each data term has norm <= |x| <= B.
      return 2.0 * *data_bound;
  }
  return absl::UnimplementedError("unsupported loss family");
}

absl::StatusOr<TrajectoryPair> RunPair(const NeighborPair& pair,
                                       const SimulationConfig& config) {
  absl::StatusOr<Validated> v = ValidateRun(pair, config);
  if (!v.ok()) return v.status();
  TrajectoryPair out;
  out.w.reserve(config.steps + 1);
  out.w_prime.reserve(config.steps + 1);
  FullRecorder recorder(out);
  out.truncation = Simulate(pair, config, *v, SplitSeed(config.seed, 0),
                            config.steps, recorder);
  return out;
}

std::vector<double> Ensemble::Marginal(std::size_t c, bool prime,
                                       int coord) const {
  const std::vector<double>& cloud = prime ? s_prime[c] : s[c];
  std::vector<double> out(static_cast<std::size_t>(trajectories));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = cloud[i * static_cast<std::size_t>(d) + coord];
  }
  return out;
}

absl::StatusOr<Ensemble> RunEnsemble(const NeighborPair& pair,
                                     const SimulationConfig& config,
                                     std::span<const int64_t> checkpoints,
                                     int64_t trajectories) {
  absl::StatusOr<Validated> v = ValidateRun(pair, config);
  if (!v.ok()) return v.status();
  if (trajectories < 1) {
    return absl::OutOfRangeError("need at least one trajectory");
  }
  if (checkpoints.empty()) {
    return absl::InvalidArgumentError("need at least one checkpoint");
  }
  Ensemble out;
  out.d = v->d;
  out.trajectories = trajectories;
  out.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  std::sort(out.checkpoints.begin(), out.checkpoints.end());
  out.checkpoints.erase(
      std::unique(out.checkpoints.begin(), out.checkpoints.end()),
      out.checkpoints.end());
  if (out.checkpoints.front() < 0 || out.checkpoints.back() > config.steps) {
    return absl::OutOfRangeError(absl::StrCat(
        "checkpoints must lie in [0, steps] = [0, ", config.steps, "]"));
  }
  const std::size_t slots =
      static_cast<std::size_t>(trajectories) * static_cast<std::size_t>(v->d);
  out.s.assign(out.checkpoints.size(), std::vector<double>(slots));
  out.s_prime.assign(out.checkpoints.size(), std::vector<double>(slots));

  std::vector<std::optional<Truncation>> truncations(
      static_cast<std::size_t>(trajectories));
  const int64_t last = out.checkpoints.back();
  ParallelFor(static_cast<std::size_t>(trajectories),
              [&](std::size_t begin, std::size_t end) {
                for (std::size_t i = begin; i < end; ++i) {
                  CheckpointRecorder recorder(out, i);
                  truncations[i] = Simulate(pair, config, *v,
                                            SplitSeed(config.seed, i), last,
                                            recorder);
                }
              });
  for (std::size_t i = 0; i < truncations.size(); ++i) {
    if (truncations[i].has_value()) {
      return absl::OutOfRangeError(absl::StrCat(
          "trajectory ", i, " truncated: ", truncations[i]->message));
    }
  }
  return out;
}

void WriteEnsembleCsv(const Ensemble& ensemble, std::ostream& out) {
  CsvWriter csv(out);
  std::vector<std::string> row = {"trajectory_id", "step", "which"};
  for (int j = 1; j <= ensemble.d; ++j) row.push_back(absl::StrCat("w_", j));
  csv.Row(row);
  const std::size_t d = static_cast<std::size_t>(ensemble.d);
  for (int64_t i = 0; i < ensemble.trajectories; ++i) {
    for (std::size_t c = 0; c < ensemble.checkpoints.size(); ++c) {
      for (int which = 0; which < 2; ++which) {
        const std::vector<double>& cloud =
            which == 0 ? ensemble.s[c] : ensemble.s_prime[c];
        row = {absl::StrCat(i), absl::StrCat(ensemble.checkpoints[c]),
               which == 0 ? "S" : "Sprime"};
        for (std::size_t j = 0; j < d; ++j) {
          row.push_back(FormatDouble(cloud[i * d + j]));
        }
        csv.Row(row);
      }
    }
  }
}

Dataset SyntheticBallDataset(int64_t n, int d, double radius, uint64_t seed) {
  NoiseStream rng(SplitSeed(seed, 0x5eedda7aULL));
  Dataset out;
  out.bound = radius;
  out.points.reserve(static_cast<std::size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    Point p = SampleGaussian(d, rng);
    const double norm = Norm(p);
    const double r = radius * std::pow(rng.Uniform(), 1.0 / d);
    for (double& x : p) x *= norm > 0.0 ? r / norm : 0.0;
    out.points.push_back(std::move(p));
  }
  return out;
}

}  // namespace levydp
