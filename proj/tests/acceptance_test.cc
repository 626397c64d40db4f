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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "envelope_ode.h"
#include "levydp/accountant.h"
#include "levydp/constants.h"
#include "levydp/poincare.h"
#include "levydp/privacy_core.h"
#include "levydp/simulator.h"
#include "levydp/stable_noise.h"
#include "levydp/verify.h"

namespace levydp {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct SuiteRun {
  std::vector<VerifyRow> rows;
  std::string error;
  double seconds = 0.0;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

SuiteRun RunTimed(const std::string& suite) {
  const auto start = std::chrono::steady_clock::now();
  SuiteRun out;
  absl::StatusOr<std::vector<VerifyRow>> rows = RunSuite(suite, {});
  if (rows.ok()) {
    out.rows = *std::move(rows);
  } else {
    out.error = std::string(rows.status().message());
  }
  out.seconds = Seconds(start);
  return out;
}

// All rows whose name starts with one of `prefixes` pass, and at least one
// such row exists.
Outcome RowsPass(const SuiteRun& run, const std::vector<std::string>& prefixes,
                 double budget_seconds) {
  if (!run.error.empty()) return {false, run.error};
  int matched = 0;
  std::string failed;
  for (const VerifyRow& row : run.rows) {
    for (const std::string& prefix : prefixes) {
      if (row.check_name.rfind(prefix, 0) != 0) continue;
      ++matched;
      if (!row.pass) {
        absl::StrAppend(&failed, " ", row.check_name, row.parameter_json,
                        " margin=", row.margin);
      }
    }
  }
  const bool in_time = run.seconds < budget_seconds;
  std::string detail = absl::StrCat(matched, " rows, ", run.seconds, " s");
  if (!failed.empty()) absl::StrAppend(&detail, "; failed:", failed);
  if (!in_time) absl::StrAppend(&detail, "; over ", budget_seconds, " s budget");
  return {matched > 0 && failed.empty() && in_time, detail};
}

Outcome EnvelopeVersusOde() {
  const auto start = std::chrono::steady_clock::now();
  NoiseStream rng(2024);
  double worst_excess = -1e300;
  double worst_decaying = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = 5.0 * (1.0 - rng.Uniform());
    const double k = 5.0 * rng.Uniform();
    const double f0 = 3.0 * rng.Uniform();
    const EnvelopeParams p{k, a, f0};
    testing::IntegrateEnvelopeOde(k, a, f0, 10.0, 1000, [&](double t, double f) {
      worst_excess = std::max(worst_excess, f - SolveEnvelope(p, t)->value);
      if (k < a) {
        worst_decaying =
            std::max(worst_decaying, std::abs(f - DecayingEnvelope(p, t).value()));
      }
    });
  }
  const double seconds = Seconds(start);
  return {worst_excess <= 1e-6 && worst_decaying <= 1e-6 && seconds < 60.0,
          absl::StrCat("max excess ", worst_excess, ", max case-3 error ",
                       worst_decaying, ", ", seconds, " s")};
}

Outcome ConstantAsymptotics() {
  std::string detail;
  bool pass = true;
  for (int d : {1, 3, 10}) {
    const double alpha = 1.999;
    const double c = StableGeneratorConstant(alpha, d).value();
    const double leading = (2.0 - alpha) * std::pow(M_PI, -0.5 * d) * d *
                           std::exp(std::lgamma(0.5 * d));
    const double ratio = c / leading;
    pass = pass && ratio >= 0.98 && ratio <= 1.02;
    absl::StrAppend(&detail, "d=", d, " ratio ", ratio, "; ");
  }
  const double doubling = PureJumpConstant(1.5, 128, 1.0).value() /
                          PureJumpConstant(1.5, 64, 1.0).value();
  const double target = std::pow(2.0, 1.0 - 0.75);
  pass = pass && std::abs(doubling / target - 1.0) <= 0.05;
  absl::StrAppend(&detail, "doubling ratio ", doubling, " vs ", target);
  return {pass, detail};
}

Outcome AccountantAlgebra() {
  NoiseStream rng(77);
  int regime_mismatch = 0;
  int horizon_mismatch = 0;
  int failures = 0;
  double worst_uniform = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    AccountingParams p;
    p.n = 1 + static_cast<int64_t>(rng.Below(10000));
    p.d = 1 + static_cast<int>(rng.Below(100));
    p.beta = 2.0 + 62.0 * rng.Uniform();
    p.sensitivity = 10.0 * rng.Uniform();
    p.gamma = 0.01 + 10.0 * rng.Uniform();
    p.radius = 0.1 + 5.0 * rng.Uniform();
    const bool multifractal = rng.Uniform() < 0.5;
    p.noise = {1.0 + 0.99 * (1.0 - rng.Uniform()), 0.05 + 3.0 * rng.Uniform(),
               multifractal ? 0.05 + 3.0 * rng.Uniform() : 0.0};
    const int64_t k = static_cast<int64_t>(rng.Below(100000));
    const double eta = 0.001 + 0.999 * rng.Uniform();
    absl::StatusOr<AccountingResult> discrete =
        ComputeBound(p, Horizon::Discrete(k, eta));
    absl::StatusOr<AccountingResult> continuous =
        ComputeBound(p, Horizon::Continuous(static_cast<double>(k) * eta));
    if (!discrete.ok() || !continuous.ok()) {
      ++failures;
      continue;
    }
    if ((discrete->guarantee.regime == Regime::kTimeUniform) !=
        (discrete->drive < discrete->contraction)) {
      ++regime_mismatch;
    }
    if (discrete->uniform_value.has_value()) {
      const double exact = std::log(
          discrete->contraction / (discrete->contraction - discrete->drive));
      worst_uniform =
          std::max(worst_uniform, std::abs(*discrete->uniform_value - exact));
    }
    if (discrete->guarantee.kappa != continuous->guarantee.kappa ||
        discrete->guarantee.regime != continuous->guarantee.regime) {
      ++horizon_mismatch;
    }
  }

  AccountingParams p;
  p.n = 100000;
  p.d = 8;
  p.sensitivity = 1.0;
  p.noise = {1.5, 1.0, 0.0};
  const std::vector<double> dims = {8, 16, 24, 32, 40, 48, 56, 64};
  absl::StatusOr<std::vector<SweepRow>> rows = Sweep(
      p, Horizon::Continuous(1.0), SweepAxis::kDimension, dims, {}, 1e-5);
  double slope = std::nan("");
  if (rows.ok()) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const double x = std::log(dims[i]);
      const double y = std::log((*rows)[i].zero_delta);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(dims.size());
    slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  const bool slope_ok = std::abs(slope - 0.125) <= 0.15 * 0.125;
  return {failures == 0 && regime_mismatch == 0 && horizon_mismatch == 0 &&
              worst_uniform <= 1e-12 && slope_ok,
          absl::StrCat("errors ", failures, ", regime mismatches ",
                       regime_mismatch, ", max uniform error ", worst_uniform,
                       ", horizon mismatches ", horizon_mismatch,
                       ", d-slope ", slope)};
}

Outcome PoincareTracker() {
  ConvexProblem p;
  p.lambda = 0.9;
  p.smoothness = 1.0;
  p.alpha = 1.5;
  p.d = 2;
  p.sigma = 1.0;
  p.eta = ((p.alpha + p.d) * p.lambda - p.d) / (p.alpha * p.lambda);
  absl::StatusOr<TrackResult> r = TrackSgd(p, 0.0, 0);
  if (!r.ok()) return {false, std::string(r.status().message())};
  auto four_digits = [](double got, double want) {
    return std::abs(got - want) <= 5e-4 * std::abs(want);
  };
  absl::StatusOr<TrackResult> held = TrackSgd(p, r->c0, 1000);
  const double drift = held.ok() ? std::abs(held->constants.frac - r->c0) : 1e300;
  ConvexProblem bad = p;
  bad.lambda = 0.5;
  bad.eta = 0.5;
  absl::StatusOr<TrackResult> rejected = TrackSgd(bad, 0.0, 10);
  const bool inadmissible = rejected.ok() && !rejected->admissible;
  return {r->admissible && four_digits(r->eta0, 0.85185) &&
              four_digits(r->factor_at_eta0, 0.2796) &&
              four_digits(r->c0, 1.18251) && drift <= 1e-12 && inadmissible,
          absl::StrCat("eta0 ", r->eta0, ", F(eta0) ", r->factor_at_eta0,
                       ", c0 ", r->c0, ", drift ", drift,
                       ", inadmissible rejected ", inadmissible)};
}

Outcome SimulationSanity(const SuiteRun& flow, const SuiteRun& renyi) {
  Dataset s{{{0.0}, {0.5}, {-0.5}, {1.0}}, 1.0};
  SimulationConfig c;
  c.noise = {1.5, 0.5, 0.5};
  c.eta = 0.1;
  c.steps = 200;
  c.batch = 2;
  c.seed = 31;
  absl::StatusOr<TrajectoryPair> same =
      RunPair(MakeNeighborPair(s, 3, {1.0}).value(), c);
  const bool identical = same.ok() && same->w == same->w_prime;

  c.noise = {1.5, 0.0, 0.0};
  c.batch = 4;
  c.init.center = {2.0};
  absl::StatusOr<TrajectoryPair> plain =
      RunPair(MakeNeighborPair(s, 3, {-1.0}).value(), c);
  double worst = plain.ok() ? 0.0 : 1e300;
  if (plain.ok()) {
    for (int k = 0; k <= c.steps; ++k) {
      const double decay = std::pow(1.0 - c.eta, k);
      worst = std::max(worst,
                       std::abs(plain->w[k][0] - (0.25 + 1.75 * decay)));
      worst = std::max(worst,
                       std::abs(plain->w_prime[k][0] - (-0.25 + 2.25 * decay)));
    }
  }
  const Outcome flow_ok = RowsPass(flow, {"flow_below_linear_bound"}, 300.0);
  const Outcome renyi_ok = RowsPass(renyi, {"renyi_gaussian_closed_form"}, 300.0);
  return {identical && worst <= 1e-10 && flow_ok.pass && renyi_ok.pass,
          absl::StrCat("identical ", identical, ", closed-form error ", worst,
                       ", flow [", flow_ok.detail, "], renyi [",
                       renyi_ok.detail, "]")};
}

}  // namespace
}  // namespace levydp

int main() {
  using levydp::Outcome;
  using levydp::RowsPass;
  const levydp::SuiteRun bregman = levydp::RunTimed("bregman");
  const levydp::SuiteRun sampler = levydp::RunTimed("sampler");
  const levydp::SuiteRun bbm = levydp::RunTimed("bbm");
  const levydp::SuiteRun poincare = levydp::RunTimed("poincare");
  const levydp::SuiteRun renyi = levydp::RunTimed("renyi");
  const levydp::SuiteRun flow = levydp::RunTimed("flow");

  const std::vector<std::pair<std::string, Outcome>> results = {
      {"1 bregman gap", RowsPass(bregman, {"bregman_"}, 5.0)},
      {"2 envelope vs ode", levydp::EnvelopeVersusOde()},
      {"3 sampler characteristic function",
       RowsPass(sampler, {"sampler_characteristic_function", "positive_stable_ks"}, 120.0)},
      {"4 bbm convergence",
       RowsPass(bbm, {"bbm_gap_decreasing", "bbm_limit_relative_gap"}, 120.0)},
      {"5 spherical reconstruction",
       RowsPass(bbm, {"spherical_reconstruction", "spherical_j0_gradient_form"},
                120.0)},
      {"6 fractional poincare", RowsPass(poincare, {"fractional_poincare_"}, 180.0)},
      {"7 constant asymptotics", levydp::ConstantAsymptotics()},
      {"8 accountant algebra", levydp::AccountantAlgebra()},
      {"9 poincare tracker", levydp::PoincareTracker()},
      {"10 coupled simulation", levydp::SimulationSanity(flow, renyi)},
  };
  int failed = 0;
  for (const auto& [name, outcome] : results) {
    std::printf("%s criterion %s: %s\n", outcome.pass ? "PASS" : "FAIL",
                name.c_str(), outcome.detail.c_str());
    failed += outcome.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
