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

#include "levydp/verify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "levydp/csv.h"
#include "levydp/divergence_lab.h"
#include "levydp/parallel.h"
#include "levydp/poincare.h"
#include "levydp/simulator.h"
#include "levydp/stable_noise.h"
#include "levydp/test_functions.h"

namespace levydp {
namespace {

using Json = nlohmann::json;
using Rows = std::vector<VerifyRow>;

// Independent streams per shard keep the draws fixed for any worker count.
constexpr std::size_t kShards = 64;

using Draw = std::function<void(NoiseStream&, std::span<double>)>;

SampleCloud DrawCloud(std::size_t n, int d, uint64_t seed, const Draw& draw) {
  SampleCloud cloud;
  cloud.d = d;
  cloud.values.assign(n * d, 0.0);
  ParallelFor(kShards, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      NoiseStream rng(SplitSeed(seed, s));
      const std::size_t lo = s * n / kShards;
      const std::size_t hi = (s + 1) * n / kShards;
      for (std::size_t i = lo; i < hi; ++i) {
        draw(rng, std::span<double>(cloud.values).subspan(i * d, d));
      }
    }
  });
  return cloud;
}

Draw GaussianDraw() {
  return [](NoiseStream& rng, std::span<double> out) {
    for (double& x : out) x = rng.Gaussian();
  };
}

Draw ShiftedGaussianDraw(double shift) {
  return [shift](NoiseStream& rng, std::span<double> out) {
    for (double& x : out) x = shift + rng.Gaussian();
  };
}

Draw StableDraw(const IsotropicStableSampler& sampler, int copies) {
  return [sampler, copies](NoiseStream& rng, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    double buffer[3];
    std::span<double> one(buffer, out.size());
    for (int c = 0; c < copies; ++c) {
      sampler.Sample(rng, one);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += one[j];
    }
  };
}

std::size_t Scaled(const VerifyOptions& o, double full, std::size_t least) {
  return std::max(least, static_cast<std::size_t>(std::llround(full * o.scale)));
}

VerifyRow Row(std::string name, const Json& params, double lhs, double rhs,
              double mc_error, bool pass) {
  VerifyRow row;
  row.check_name = std::move(name);
  row.parameter_json = params.dump();
  row.lhs = lhs;
  row.rhs = rhs;
  row.margin = rhs - lhs;
  row.mc_error = mc_error;
  row.pass = pass;
  return row;
}

// Claims lhs <= rhs.
VerifyRow AtMost(std::string name, const Json& params, double lhs, double rhs,
                 double mc_error = 0.0) {
  return Row(std::move(name), params, lhs, rhs, mc_error, lhs <= rhs);
}

double RelativeGap(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

absl::StatusOr<Rows> BregmanSuite(const VerifyOptions& o) {
  const std::size_t n = Scaled(o, 1e5, 1000);
  NoiseStream rng(SplitSeed(o.seed, 101));
  double min_gap = 1e300;
  double worst_beta2 = 0.0;
  double worst_equal = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 10.0 * rng.Uniform();
    const double b = 10.0 * rng.Uniform();
    const double beta = 2.0 + 6.0 * rng.Uniform();
    min_gap = std::min(min_gap, BregmanGap(a, b, beta));
    worst_beta2 = std::max(
        worst_beta2, std::abs(BregmanGap(a, b, 2.0)) / (1.0 + a * a + b * b));
    worst_equal = std::max(worst_equal, std::abs(BregmanGap(a, a, beta)) /
                                            (1.0 + beta * std::pow(a, beta)));
  }
  Rows rows;
  Json random = {{"samples", n}, {"a_max", 10}, {"beta", {2, 8}}};
  rows.push_back(Row("bregman_random_nonnegative", random, 0.0, min_gap, 0.0,
                     min_gap >= -1e-12));
  rows.push_back(AtMost("bregman_beta2_zero", random, worst_beta2, 1e-12));
  rows.push_back(AtMost("bregman_equal_args_zero", random, worst_equal, 1e-12));
  const double gap = BregmanGap(0.0, 1.0, 3.0);
  rows.push_back(AtMost("bregman_a0_beta3", {{"a", 0}, {"b", 1}, {"beta", 3}},
                        std::abs(gap - 1.0), 1e-12));
  return rows;
}

double LevyCdf(double x) {
  // Positive 1/2-stable law with Laplace transform exp(-sqrt(u)).
  return x <= 0.0 ? 0.0 : std::erfc(0.5 / std::sqrt(x));
}

absl::StatusOr<Rows> SamplerSuite(const VerifyOptions& o) {
  Rows rows;
  const std::size_t n = Scaled(o, 1e6, 10000);
  uint64_t stream = 200;
  for (double alpha : {1.2, 1.5, 1.9}) {
    for (int d = 1; d <= 3; ++d) {
      absl::StatusOr<IsotropicStableSampler> sampler =
          IsotropicStableSampler::Create(alpha, d);
      if (!sampler.ok()) return sampler.status();
      const SampleCloud cloud =
          DrawCloud(n, d, SplitSeed(o.seed, stream++), StableDraw(*sampler, 1));
      for (double xi : {0.5, 1.0, 2.0}) {
        std::vector<double> cosines(n);
        for (std::size_t i = 0; i < n; ++i) {
          cosines[i] = std::cos(xi * cloud.at(i)[0]);
        }
        const MeanEstimate m = EstimateMean(cosines);
        const double exact = std::exp(-std::pow(xi, alpha));
        rows.push_back(AtMost(
            "sampler_characteristic_function",
            {{"alpha", alpha}, {"d", d}, {"xi", xi}, {"samples", n}},
            std::abs(m.mean - exact), 5e-3, m.standard_error));
      }
    }
  }
  const std::size_t m = Scaled(o, 1e5, 1000);
  absl::StatusOr<PositiveStableSampler> positive =
      PositiveStableSampler::Create(0.5);
  if (!positive.ok()) return positive.status();
  NoiseStream rng(SplitSeed(o.seed, stream++));
  std::vector<double> draws(m);
  for (double& x : draws) x = positive->Sample(rng);
  std::sort(draws.begin(), draws.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double f = LevyCdf(draws[i]);
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / m),
                   std::abs(f - static_cast<double>(i + 1) / m)});
  }
  rows.push_back(AtMost("positive_stable_ks",
                        {{"alpha_prime", 0.5}, {"samples", m}}, ks, 0.01));
  return rows;
}

absl::StatusOr<Rows> BbmSuite(const VerifyOptions& o) {
  Rows rows;
  const std::size_t n = Scaled(o, 2e4, 500);
  const SampleCloud mu = DrawCloud(n, 1, SplitSeed(o.seed, 300), GaussianDraw());
  absl::StatusOr<TestFunction> f = TestFunction::TanhRidge({1.0});
  if (!f.ok()) return f.status();
  absl::StatusOr<DirichletEstimate> e2 = DirichletForm(*f, mu, 2.0);
  if (!e2.ok()) return e2.status();
  std::vector<double> gaps;
  const std::vector<double> alphas = {1.5, 1.9, 1.99};
  for (double alpha : alphas) {
    absl::StatusOr<DirichletEstimate> e = DirichletForm(*f, mu, alpha);
    if (!e.ok()) return e.status();
    gaps.push_back(std::abs(e->value - e2->value));
  }
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    rows.push_back(Row("bbm_gap_decreasing",
                       {{"function", "tanh"}, {"samples", n},
                        {"alpha_from", alphas[i - 1]}, {"alpha_to", alphas[i]}},
                       gaps[i], gaps[i - 1], 0.0, gaps[i] < gaps[i - 1]));
  }
  rows.push_back(AtMost("bbm_limit_relative_gap",
                        {{"function", "tanh"}, {"alpha", 1.99}, {"samples", n}},
                        gaps.back() / e2->value, 0.05));

  absl::StatusOr<TestFunction> constant = TestFunction::Constant(1, 3.0);
  if (!constant.ok()) return constant.status();
  absl::StatusOr<DirichletEstimate> zero = DirichletForm(*constant, mu, 1.5);
  if (!zero.ok()) return zero.status();
  rows.push_back(AtMost("dirichlet_constant_zero", {{"alpha", 1.5}},
                        std::abs(zero->value), 0.0));

  // Two routes to the same form share the samples.
  const std::size_t m = std::min<std::size_t>(n, Scaled(o, 5000, 500));
  SampleCloud sub{1, std::vector<double>(mu.values.begin(),
                                         mu.values.begin() + m)};
  absl::StatusOr<DirichletEstimate> direct = DirichletForm(*f, sub, 1.5);
  if (!direct.ok()) return direct.status();
  absl::StatusOr<DirichletEstimate> spherical =
      ReconstructFromSpherical(*f, sub, 1.5);
  if (!spherical.ok()) return spherical.status();
  rows.push_back(AtMost("spherical_reconstruction",
                        {{"function", "tanh"}, {"alpha", 1.5}, {"samples", m}},
                        RelativeGap(spherical->value, direct->value), 0.1));

  absl::StatusOr<double> j0 = SphericalJ(0.0, *f, mu);
  absl::StatusOr<double> j_small = SphericalJ(1e-4, *f, mu);
  if (!j0.ok()) return j0.status();
  if (!j_small.ok()) return j_small.status();
  rows.push_back(AtMost("spherical_j0_gradient_form", {{"r", 0}},
                        RelativeGap(*j0, e2->value), 0.01));
  rows.push_back(AtMost("spherical_j_continuity", {{"r", 1e-4}},
                        RelativeGap(*j_small, *j0), 0.01));

  absl::StatusOr<TestFunction> linear = TestFunction::Linear({0.7});
  if (!linear.ok()) return linear.status();
  double worst = 0.0;
  for (double r : {0.5, 3.0, 10.0}) {
    absl::StatusOr<double> j = SphericalJ(r, *linear, sub);
    if (!j.ok()) return j.status();
    worst = std::max(worst, RelativeGap(*j, 0.49));
  }
  rows.push_back(AtMost("spherical_j_linear_constant",
                        {{"r", {0.5, 3, 10}}}, worst, 1e-10));
  return rows;
}

absl::StatusOr<Rows> PoincareSuite(const VerifyOptions& o) {
  Rows rows;
  const double alpha = 1.5;
  const std::size_t n = Scaled(o, 2e4, 500);
  absl::StatusOr<IsotropicStableSampler> sampler =
      IsotropicStableSampler::Create(alpha, 1);
  if (!sampler.ok()) return sampler.status();
  std::vector<std::pair<std::string, absl::StatusOr<TestFunction>>> functions;
  functions.emplace_back("gaussian_bump", TestFunction::GaussianBump(1, 1.0, 1.0));
  functions.emplace_back("tanh_ridge", TestFunction::TanhRidge({1.0}));
  functions.emplace_back("poly_bump", TestFunction::PolyBump(0.5, {1.0}, 1.0));
  functions.emplace_back("constant", TestFunction::Constant(1, 2.0));
  for (int copies : {1, 2}) {
    const SampleCloud mu = DrawCloud(n, 1, SplitSeed(o.seed, 400 + copies),
                                     StableDraw(*sampler, copies));
    const PoincareConstants c{static_cast<double>(copies), 0.0};
    for (const auto& [name, f] : functions) {
      if (!f.ok()) return f.status();
      absl::StatusOr<PoincareCheck> check =
          CheckFractionalPoincare(mu, *f, c, alpha);
      if (!check.ok()) return check.status();
      rows.push_back(Row(
          copies == 1 ? "fractional_poincare_stable"
                      : "fractional_poincare_convolution",
          {{"function", name}, {"alpha", alpha}, {"d", 1},
           {"constants", {c.frac, c.gauss}}, {"samples", n}},
          check->lhs, check->rhs, check->mc_error,
          check->margin >= -3.0 * check->mc_error));
    }
  }
  return rows;
}

absl::StatusOr<Rows> RenyiSuite(const VerifyOptions& o) {
  Rows rows;
  const std::size_t n = Scaled(o, 1e6, 10000);
  const SampleCloud p = DrawCloud(n, 1, SplitSeed(o.seed, 500), GaussianDraw());
  const SampleCloud q =
      DrawCloud(n, 1, SplitSeed(o.seed, 501), ShiftedGaussianDraw(1.0));
  const SampleCloud p2 = DrawCloud(n, 1, SplitSeed(o.seed, 502), GaussianDraw());
  // 200 bins at full size; fewer when scaled down so bins stay populated.
  RenyiOptions options;
  options.bins = static_cast<int>(
      std::ceil(200.0 * std::cbrt(static_cast<double>(n) / 1e6)));
  options.tail = std::max(1e-4, 10.0 / static_cast<double>(n));
  absl::StatusOr<RenyiEstimate> shifted =
      EstimateRenyi(p.values, q.values, 2.0, options);
  if (!shifted.ok()) return shifted.status();
  rows.push_back(AtMost("renyi_gaussian_closed_form",
                        {{"beta", 2}, {"mean_gap", 1}, {"sigma", 1},
                         {"samples", n}, {"bins", options.bins}},
                        RelativeGap(shifted->kappa, 1.0), 0.1));
  absl::StatusOr<RenyiEstimate> same =
      EstimateRenyi(p.values, p2.values, 2.0, options);
  if (!same.ok()) return same.status();
  rows.push_back(AtMost("renyi_same_distribution",
                        {{"beta", 2}, {"samples", n}, {"bins", options.bins}},
                        std::abs(same->kappa), 0.01));
  const std::vector<double> betas = {1.5, 2.0, 4.0, 8.0};
  std::vector<double> kappas;
  for (double beta : betas) {
    absl::StatusOr<RenyiEstimate> e =
        EstimateRenyi(p.values, q.values, beta, options);
    if (!e.ok()) return e.status();
    kappas.push_back(e->kappa);
  }
  for (std::size_t i = 1; i < betas.size(); ++i) {
    rows.push_back(AtMost("renyi_monotone_in_beta",
                          {{"beta_from", betas[i - 1]}, {"beta_to", betas[i]}},
                          kappas[i - 1], kappas[i]));
  }
  return rows;
}

absl::StatusOr<Rows> FlowSuite(const VerifyOptions& o) {
  Rows rows;
  Dataset data;
  data.points = {{0.0}, {0.0}, {0.0}, {1.0}};
  data.bound = 1.0;
  absl::StatusOr<NeighborPair> pair = MakeNeighborPair(data, 3, {-1.0});
  if (!pair.ok()) return pair.status();
  FlowConfig config;
  config.pair = *pair;
  config.sim.loss.family = LossFamily::kQuadratic;
  config.sim.noise = NoiseSpec{1.5, 0.0, 1.0};
  config.sim.eta = 0.1;
  config.sim.steps = 80;
  config.sim.batch = 4;
  config.sim.seed = SplitSeed(o.seed, 600);
  config.checkpoints = {5, 10, 20, 40, 80};
  config.trajectories = static_cast<int64_t>(Scaled(o, 1e5, 2000));
  config.beta = 2.0;
  config.gamma = 1.0;
  absl::StatusOr<double> sg = GradientSensitivity(config.sim.loss,
                                                  1e300, data.bound);
  if (!sg.ok()) return sg.status();
  config.sensitivity = *sg;
  absl::StatusOr<std::vector<FlowRow>> table = FlowCheck(config);
  if (!table.ok()) return table.status();
  for (const FlowRow& r : *table) {
    Json params = {{"step", r.step}, {"t", r.t}, {"eta", 0.1},
                   {"sigma2", 1}, {"n", 4}, {"beta", 2},
                   {"trajectories", config.trajectories},
                   {"kappa_bound", r.kappa_bound}};
    rows.push_back(AtMost("flow_below_linear_bound", params, r.kappa_hat,
                          r.linear_bound));
    if (r.closed_form.has_value()) {
      rows.push_back(AtMost("flow_closed_form", params,
                            RelativeGap(r.kappa_hat, *r.closed_form), 0.1));
    }
  }

  FlowConfig same = config;
  same.pair.s_prime = same.pair.s;
  same.trajectories = static_cast<int64_t>(Scaled(o, 1e4, 1000));
  same.checkpoints = {10, 80};
  absl::StatusOr<std::vector<FlowRow>> identical = FlowCheck(same);
  if (!identical.ok()) return identical.status();
  double worst = 0.0;
  for (const FlowRow& r : *identical) worst = std::max(worst, std::abs(r.kappa_hat));
  rows.push_back(AtMost("flow_identical_datasets",
                        {{"trajectories", same.trajectories}}, worst, 1e-9));
  return rows;
}

}  // namespace

const std::vector<std::string>& SuiteNames() {
  static const auto* names = new std::vector<std::string>(
      {"bregman", "bbm", "sampler", "poincare", "renyi", "flow"});
  return *names;
}

absl::StatusOr<std::vector<VerifyRow>> RunSuite(std::string_view suite,
                                                const VerifyOptions& options) {
  if (!(options.scale > 0.0 && options.scale <= 1.0)) {
    return absl::OutOfRangeError("scale must lie in (0, 1]");
  }
  absl::StatusOr<Rows> rows;
  if (suite == "all") {
    Rows all;
    for (const std::string& name : SuiteNames()) {
      absl::StatusOr<Rows> part = RunSuite(name, options);
      if (!part.ok()) return part.status();
      all.insert(all.end(), part->begin(), part->end());
    }
    return all;
  } else if (suite == "bregman") {
    rows = BregmanSuite(options);
  } else if (suite == "bbm") {
    rows = BbmSuite(options);
  } else if (suite == "sampler") {
    rows = SamplerSuite(options);
  } else if (suite == "poincare") {
    rows = PoincareSuite(options);
  } else if (suite == "renyi") {
    rows = RenyiSuite(options);
  } else if (suite == "flow") {
    rows = FlowSuite(options);
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "unknown suite '", std::string(suite),
        "' (expected bregman, bbm, sampler, poincare, renyi, flow, all)"));
  }
  if (!rows.ok()) return rows.status();
  for (VerifyRow& row : *rows) {
    row.pass = row.pass && row.margin >= options.min_margin;
  }
  return rows;
}

void WriteVerifyCsv(const std::vector<VerifyRow>& rows, std::ostream& out) {
  CsvWriter csv(out);
  csv.Row({"check_name", "parameter_json", "lhs", "rhs", "margin", "mc_error",
           "pass"});
  for (const VerifyRow& r : rows) {
    csv.Row({r.check_name, r.parameter_json, FormatDouble(r.lhs),
             FormatDouble(r.rhs), FormatDouble(r.margin),
             FormatDouble(r.mc_error), r.pass ? "true" : "false"});
  }
}

}  // namespace levydp
