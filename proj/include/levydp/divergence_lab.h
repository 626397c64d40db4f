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

#ifndef LEVYDP_DIVERGENCE_LAB_H_
#define LEVYDP_DIVERGENCE_LAB_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "levydp/poincare.h"
#include "levydp/simulator.h"
#include "levydp/test_functions.h"

namespace levydp {

// Histogram on uniform bin edges.
struct DensityEstimate {
  std::vector<double> edges;  // bins + 1 increasing values
  std::vector<double> mass;   // per-bin probability, sums to 1
  double floor = 1e-12;       // regularizer for empty reference bins
};

// Bins samples on `edges`; values outside the grid go to the edge bins.
absl::StatusOr<DensityEstimate> BuildHistogram(std::span<const double> samples,
                                               std::span<const double> edges,
                                               double floor = 1e-12);

struct RenyiOptions {
  int bins = 0;  // 0 picks ceil(N^(1/3)) clamped to [50, 2000]
  double floor = 1e-12;
  // Grid spans the pooled [tail, 1 - tail] quantiles.
  double tail = 1e-4;
  // Largest p-mass allowed in bins where the reference q is empty.
  double support_tolerance = 1e-2;
};

struct RenyiEstimate {
  double kappa = 0.0;
  int bins = 0;
  // p-mass in bins with empty reference; those bins are left out of the sum.
  double unsupported_mass = 0.0;
};

// Histogram estimate of D_beta(P || Q) = log(sum p_i^beta q_i^(1-beta)) /
// (beta - 1) on a shared grid (bin widths cancel).
absl::StatusOr<RenyiEstimate> EstimateRenyi(std::span<const double> p_samples,
                                            std::span<const double> q_samples,
                                            double beta,
                                            const RenyiOptions& options = {});

// Points stored row-major: sample i is [i * d, (i + 1) * d).
struct SampleCloud {
  int d = 1;
  std::vector<double> values;

  std::size_t size() const { return values.size() / d; }
  std::span<const double> at(std::size_t i) const {
    return std::span<const double>(values).subspan(i * d, d);
  }
};

// Quadrature for the inner integral over z in spherical coordinates.
struct QuadratureConfig {
  // Below this radius the increment is replaced by its first-order Taylor
  // term, integrated exactly; the remainder is bounded with HessianBound().
  double near_cutoff = 1e-5;
  // Radial integral truncated here; the tail is bounded with SupNorm().
  double far_cutoff = 1e6;
  int panels_per_decade = 2;  // 15-point Gauss-Legendre per panel in log r
  int directions = 16;        // d = 2: angles; d = 3: polar nodes
  // Largest acceptable truncation bound (absolute).
  double tolerance = 1e-3;
};

struct DirichletEstimate {
  double value = 0.0;
  double mc_error = 0.0;          // standard error over the samples of mu
  double truncation_error = 0.0;  // near-field + tail bound
  std::vector<double> per_sample;  // contribution of each sample
};

// alpha < 2: (C_{alpha,d} / 2) E_mu int (f(x+z) - f(x))^2 |z|^(-d-alpha) dz.
// alpha = 2: E_mu |grad f|^2.
absl::StatusOr<DirichletEstimate> DirichletForm(
    const TestFunction& f, const SampleCloud& mu, double alpha,
    const QuadratureConfig& quad = {});

// J(r) = (d / |S^{d-1}|) E_mu int_S ((1/r) int_0^r <theta, grad u(x+s theta)>
// ds)^2 dsigma(theta); J(0) = E_mu |grad u|^2. The s-integral uses
// Gauss-Legendre panels up to `s_quadrature_limit`, and the exact
// increment (u(x + r theta) - u(x)) / r beyond.
struct SphericalConfig {
  QuadratureConfig quad;
  double s_quadrature_limit = 4.0;
  double panel_width = 0.5;
};

absl::StatusOr<double> SphericalJ(double r, const TestFunction& u,
                                  const SampleCloud& mu,
                                  const SphericalConfig& config = {});

// (K / 2) int_0^inf J(r) r^(1-alpha) dr with K = C_{alpha,d} |S^{d-1}| / d,
// which equals the Dirichlet form for alpha < 2.
absl::StatusOr<DirichletEstimate> ReconstructFromSpherical(
    const TestFunction& u, const SampleCloud& mu, double alpha,
    const SphericalConfig& config = {});

// (a^beta + (beta-1) b^beta - beta a b^(beta-1)) - (a^(beta/2) - b^(beta/2))^2,
// the gap between two Bregman divergences; nonnegative for beta >= 2.
double BregmanGap(double a, double b, double beta);

struct PoincareCheck {
  double lhs = 0.0;  // Var_mu(f)
  double rhs = 0.0;  // frac * 2 E_alpha + gauss * E_2
  double margin = 0.0;
  double mc_error = 0.0;  // standard error of the margin
  double truncation_error = 0.0;
};

// Empirical check of Var_mu f <= a C int int (f(x) - f(x+z))^2 |z|^(-d-alpha)
// + b int |grad f|^2 on samples of mu.
absl::StatusOr<PoincareCheck> CheckFractionalPoincare(
    const SampleCloud& mu, const TestFunction& f, const PoincareConstants& c,
    double alpha, const QuadratureConfig& quad = {});

struct FlowConfig {
  NeighborPair pair;
  SimulationConfig sim;
  std::vector<int64_t> checkpoints;
  int64_t trajectories = 100000;
  double beta = 2.0;
  double gamma = 1.0;        // Poincare constant fed to the accountant
  double sensitivity = 1.0;  // S_g
  double radius = 1.0;       // R, pure-jump only
  RenyiOptions renyi;
};

struct FlowRow {
  int64_t step = 0;
  double t = 0.0;
  double kappa_hat = 0.0;
  double kappa_bound = 0.0;  // accountant guarantee (minimum of all bounds)
  double linear_bound = 0.0;
  // Exact Renyi divergence of the two Gaussian marginals, when the dynamics
  // are linear and Gaussian (quadratic loss, full batch, no projection,
  // sigma_alpha = 0).
  std::optional<double> closed_form;
  // Pure-jump bounds hold for the user-supplied R only.
  bool conditional_on_radius = false;
};

absl::StatusOr<std::vector<FlowRow>> FlowCheck(const FlowConfig& config);

}  // namespace levydp

#endif  // LEVYDP_DIVERGENCE_LAB_H_
