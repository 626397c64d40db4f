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

#include "levydp/divergence_lab.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "boost/math/quadrature/gauss.hpp"
#include "levydp/accountant.h"
#include "levydp/constants.h"
#include "levydp/parallel.h"
#include "levydp/privacy_core.h"

namespace levydp {
namespace {

using Rule15 = boost::math::quadrature::gauss<double, 15>;
using Rule16 = boost::math::quadrature::gauss<double, 16>;

// Full node/weight list on [-1, 1] from Boost's half rule.
template <typename Rule>
std::vector<std::pair<double, double>> FullRule() {
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.emplace_back(x[i], w[i]);
    if (x[i] != 0.0) out.emplace_back(-x[i], w[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<std::pair<double, double>>& Panel15() {
  static const auto* rule =
      new std::vector<std::pair<double, double>>(FullRule<Rule15>());
  return *rule;
}

struct Direction {
  std::vector<double> theta;
  double weight = 0.0;
};

// Quadrature on S^(d-1); weights sum to the sphere area.
absl::StatusOr<std::vector<Direction>> SphereRule(int d, int directions) {
  std::vector<Direction> out;
  if (d == 1) {
    out.push_back({{1.0}, 1.0});
    out.push_back({{-1.0}, 1.0});
    return out;
  }
  if (directions < 1) {
    return absl::OutOfRangeError("need at least one direction");
  }
  const double pi = std::numbers::pi;
  if (d == 2) {
    for (int j = 0; j < directions; ++j) {
      const double phi = 2.0 * pi * (j + 0.5) / directions;
      out.push_back({{std::cos(phi), std::sin(phi)}, 2.0 * pi / directions});
    }
    return out;
  }
  if (d == 3) {
    for (const auto& [z, w] : FullRule<Rule16>()) {
      const double rho = std::sqrt(1.0 - z * z);
      for (int j = 0; j < directions; ++j) {
        const double phi = 2.0 * pi * (j + 0.5) / directions;
        out.push_back({{rho * std::cos(phi), rho * std::sin(phi), z},
                       w * 2.0 * pi / directions});
      }
    }
    return out;
  }
  return absl::UnimplementedError(
      absl::StrCat("nonlocal quadrature supports d <= 3, got d = ", d));
}

absl::Status ValidateQuadrature(const QuadratureConfig& q) {
  if (!(q.near_cutoff > 0.0) || !(q.far_cutoff > q.near_cutoff) ||
      !std::isfinite(q.far_cutoff)) {
    return absl::OutOfRangeError(
        "need 0 < near_cutoff < far_cutoff < infinity");
  }
  if (q.panels_per_decade < 1) {
    return absl::OutOfRangeError("panels_per_decade must be >= 1");
  }
  if (!(q.tolerance > 0.0)) {
    return absl::OutOfRangeError("tolerance must be positive");
  }
  return absl::OkStatus();
}

absl::Status ValidateCloud(const SampleCloud& mu, int d) {
  if (mu.d != d) {
    return absl::InvalidArgumentError(absl::StrCat(
        "samples have dimension ", mu.d, ", function has ", d));
  }
  if (mu.values.empty() || mu.values.size() % mu.d != 0) {
    return absl::InvalidArgumentError("need a nonempty sample cloud");
  }
  return absl::OkStatus();
}

// Nodes (r, dr/r weight) of log-scale Gauss-Legendre on [near, far].
std::vector<std::pair<double, double>> RadialNodes(const QuadratureConfig& q) {
  const double lo = std::log(q.near_cutoff);
  const double hi = std::log(q.far_cutoff);
  const int panels = std::max(
      1, static_cast<int>(std::ceil((hi - lo) / std::log(10.0) *
                                    q.panels_per_decade)));
  const double width = (hi - lo) / panels;
  std::vector<std::pair<double, double>> out;
  out.reserve(panels * Panel15().size());
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    for (const auto& [x, w] : Panel15()) {
      out.emplace_back(std::exp(mid + 0.5 * width * x), 0.5 * width * w);
    }
  }
  return out;
}

// Per-direction bounds for the near-field Taylor replacement and the far
// tail, for an integrand (f(x + r theta) - f(x))^2 r^(-1-alpha).
double NearRemainder(double hessian, double grad_norm, double alpha,
                     double h) {
  return hessian * grad_norm * std::pow(h, 3.0 - alpha) / (3.0 - alpha) +
         hessian * hessian * std::pow(h, 4.0 - alpha) / (4.0 * (4.0 - alpha));
}

double TailBound(double sup_norm, double alpha, double z_max) {
  if (sup_norm == 0.0) return 0.0;
  return 4.0 * sup_norm * sup_norm * (2.0 / alpha) * std::pow(z_max, -alpha);
}

// Shared driver: the increment (f(x + r theta) - f(x)) / r is supplied by
// `increment`; everything else is common to both routes.
template <typename Increment>
absl::StatusOr<DirichletEstimate> NonlocalForm(const TestFunction& f,
                                               const SampleCloud& mu,
                                               double alpha,
                                               const QuadratureConfig& quad,
                                               Increment increment) {
  if (absl::Status s = ValidateFractionalIndex(alpha); !s.ok()) return s;
  if (absl::Status s = ValidateQuadrature(quad); !s.ok()) return s;
  const int d = f.dimension();
  if (absl::Status s = ValidateCloud(mu, d); !s.ok()) return s;
  absl::StatusOr<std::vector<Direction>> dirs = SphereRule(d, quad.directions);
  if (!dirs.ok()) return dirs.status();
  absl::StatusOr<double> c = StableGeneratorConstant(alpha, d);
  if (!c.ok()) return c.status();
  absl::StatusOr<double> area = SphereArea(d);
  if (!area.ok()) return area.status();

  const std::size_t n = mu.size();
  const double h = quad.near_cutoff;
  std::vector<std::pair<double, double>> nodes = RadialNodes(quad);
  // (r q)^2 r^(-1-alpha) dr = q^2 r^(2-alpha) d(log r)
  for (auto& [r, w] : nodes) w *= std::pow(r, 2.0 - alpha);
  const double near_factor = std::pow(h, 2.0 - alpha) / (2.0 - alpha);

  DirichletEstimate out;
  out.per_sample.assign(n, 0.0);
  std::vector<double> grad_norm(n, 0.0);
  ParallelFor(n, [&](std::size_t begin, std::size_t end) {
    std::vector<double> g(d);
    for (std::size_t i = begin; i < end; ++i) {
      std::span<const double> x = mu.at(i);
      f.Gradient(x, g);
      double g2 = 0.0;
      for (double v : g) g2 += v * v;
      grad_norm[i] = std::sqrt(g2);
      double total = 0.0;
      for (const Direction& dir : *dirs) {
        double slope = 0.0;
        for (int j = 0; j < d; ++j) slope += dir.theta[j] * g[j];
        double radial = slope * slope * near_factor;
        for (const auto& [r, w] : nodes) {
          const double q = increment(x, dir.theta, r);
          radial += w * q * q;
        }
        total += dir.weight * radial;
      }
      out.per_sample[i] = 0.5 * *c * total;
    }
  });

  const double g_max = *std::max_element(grad_norm.begin(), grad_norm.end());
  out.truncation_error =
      0.5 * *c * *area *
      (NearRemainder(f.HessianBound(), g_max, alpha, h) +
       TailBound(f.SupNorm(), alpha, quad.far_cutoff));
  if (!(out.truncation_error <= quad.tolerance)) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "quadrature budget exceeded: truncation bound %g > tolerance %g",
        out.truncation_error, quad.tolerance));
  }
  const MeanEstimate m = EstimateMean(out.per_sample);
  out.value = m.mean;
  out.mc_error = m.standard_error;
  return out;
}

DirichletEstimate GradientForm(const TestFunction& f, const SampleCloud& mu) {
  DirichletEstimate out;
  out.per_sample.assign(mu.size(), 0.0);
  ParallelFor(mu.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out.per_sample[i] = f.GradientNormSquared(mu.at(i));
    }
  });
  const MeanEstimate m = EstimateMean(out.per_sample);
  out.value = m.mean;
  out.mc_error = m.standard_error;
  return out;
}

// (u(x + r theta) - u(x)) / r.
double Difference(const TestFunction& u, std::span<const double> x,
                  std::span<const double> theta, double r) {
  double buffer[3];
  std::span<double> y(buffer, x.size());
  for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + r * theta[j];
  return (u.Value(y) - u.Value(x)) / r;
}

// (1/r) int_0^r <theta, grad u(x + s theta)> ds by Gauss-Legendre panels.
double AveragedSlope(const TestFunction& u, std::span<const double> x,
                     std::span<const double> theta, double r,
                     double panel_width) {
  const int d = static_cast<int>(x.size());
  const int panels =
      std::max(1, static_cast<int>(std::ceil(r / panel_width)));
  const double width = r / panels;
  double buffer_y[3];
  double buffer_g[3];
  std::span<double> y(buffer_y, d);
  std::span<double> g(buffer_g, d);
  double integral = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (const auto& [node, w] : Panel15()) {
      const double s = mid + 0.5 * width * node;
      for (int j = 0; j < d; ++j) y[j] = x[j] + s * theta[j];
      u.Gradient(y, g);
      double slope = 0.0;
      for (int j = 0; j < d; ++j) slope += theta[j] * g[j];
      integral += 0.5 * width * w * slope;
    }
  }
  return integral / r;
}

absl::Status ValidateSpherical(const SphericalConfig& config) {
  if (absl::Status s = ValidateQuadrature(config.quad); !s.ok()) return s;
  if (!(config.panel_width > 0.0) || !(config.s_quadrature_limit >= 0.0)) {
    return absl::OutOfRangeError(
        "panel_width must be positive and s_quadrature_limit >= 0");
  }
  return absl::OkStatus();
}

// Histogram grid: uniform edges over the pooled [tail, 1 - tail] quantiles.
std::vector<double> SharedEdges(std::span<const double> p,
                                std::span<const double> q, int bins,
                                double tail) {
  std::vector<double> pooled(p.begin(), p.end());
  pooled.insert(pooled.end(), q.begin(), q.end());
  const std::size_t last = pooled.size() - 1;
  const auto lo_index = static_cast<std::size_t>(std::floor(tail * last));
  const auto hi_index = static_cast<std::size_t>(std::ceil((1.0 - tail) * last));
  std::nth_element(pooled.begin(), pooled.begin() + lo_index, pooled.end());
  double lo = pooled[lo_index];
  std::nth_element(pooled.begin(), pooled.begin() + hi_index, pooled.end());
  double hi = pooled[hi_index];
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> edges(bins + 1);
  for (int i = 0; i <= bins; ++i) {
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / bins;
  }
  edges[bins] = hi;
  return edges;
}

}  // namespace

absl::StatusOr<DensityEstimate> BuildHistogram(std::span<const double> samples,
                                               std::span<const double> edges,
                                               double floor) {
  if (samples.empty()) return absl::InvalidArgumentError("no samples");
  if (edges.size() < 2) {
    return absl::InvalidArgumentError("need at least one bin");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      return absl::InvalidArgumentError("bin edges must increase");
    }
  }
  if (!(floor > 0.0)) return absl::OutOfRangeError("floor must be positive");
  const std::size_t bins = edges.size() - 1;
  const double lo = edges.front();
  const double width = (edges.back() - lo) / static_cast<double>(bins);
  std::vector<int64_t> counts(bins, 0);
  for (double x : samples) {
    if (std::isnan(x)) return absl::InvalidArgumentError("NaN sample");
    double pos = (x - lo) / width;
    std::size_t k = pos <= 0.0 ? 0
                    : pos >= static_cast<double>(bins)
                        ? bins - 1
                        : static_cast<std::size_t>(pos);
    counts[std::min(k, bins - 1)]++;
  }
  DensityEstimate out;
  out.edges.assign(edges.begin(), edges.end());
  out.floor = floor;
  out.mass.resize(bins);
  const double total = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < bins; ++i) out.mass[i] = counts[i] / total;
  return out;
}

absl::StatusOr<RenyiEstimate> EstimateRenyi(std::span<const double> p_samples,
                                            std::span<const double> q_samples,
                                            double beta,
                                            const RenyiOptions& options) {
  if (p_samples.empty() || q_samples.empty()) {
    return absl::InvalidArgumentError("both sample sets must be nonempty");
  }
  if (absl::Status s = ValidateConversionOrder(beta); !s.ok()) return s;
  if (!(options.tail >= 0.0 && options.tail < 0.5)) {
    return absl::OutOfRangeError("tail must lie in [0, 0.5)");
  }
  int bins = options.bins;
  if (bins == 0) {
    const double n = static_cast<double>(
        std::max(p_samples.size(), q_samples.size()));
    bins = std::clamp(static_cast<int>(std::ceil(std::cbrt(n))), 50, 2000);
  }
  if (bins < 1) return absl::OutOfRangeError("bins must be positive");

  const std::vector<double> edges =
      SharedEdges(p_samples, q_samples, bins, options.tail);
  absl::StatusOr<DensityEstimate> p =
      BuildHistogram(p_samples, edges, options.floor);
  if (!p.ok()) return p.status();
  absl::StatusOr<DensityEstimate> q =
      BuildHistogram(q_samples, edges, options.floor);
  if (!q.ok()) return q.status();

  RenyiEstimate out;
  out.bins = bins;
  std::vector<double> terms;
  terms.reserve(bins);
  for (int i = 0; i < bins; ++i) {
    const double pi = p->mass[i];
    const double qi = q->mass[i];
    if (pi == 0.0) continue;
    if (qi == 0.0) {
      out.unsupported_mass += pi;
      continue;
    }
    terms.push_back(std::exp(beta * std::log(pi) + (1.0 - beta) * std::log(qi)));
  }
  if (out.unsupported_mass > options.support_tolerance) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "degenerate support: p has mass %g where q has none (tolerance %g)",
        out.unsupported_mass, options.support_tolerance));
  }
  const double sum = PairwiseSum(terms);
  out.kappa = std::log(sum) / (beta - 1.0);
  return out;
}

absl::StatusOr<DirichletEstimate> DirichletForm(const TestFunction& f,
                                                const SampleCloud& mu,
                                                double alpha,
                                                const QuadratureConfig& quad) {
  if (alpha == 2.0) {
    if (absl::Status s = ValidateCloud(mu, f.dimension()); !s.ok()) return s;
    return GradientForm(f, mu);
  }
  if (f.family() == TestFunction::Family::kConstant) {
    if (absl::Status s = ValidateFractionalIndex(alpha); !s.ok()) return s;
    if (absl::Status s = ValidateCloud(mu, f.dimension()); !s.ok()) return s;
    DirichletEstimate out;
    out.per_sample.assign(mu.size(), 0.0);
    return out;
  }
  return NonlocalForm(f, mu, alpha, quad,
                      [&f](std::span<const double> x,
                           std::span<const double> theta, double r) {
                        return Difference(f, x, theta, r);
                      });
}

absl::StatusOr<double> SphericalJ(double r, const TestFunction& u,
                                  const SampleCloud& mu,
                                  const SphericalConfig& config) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    return absl::OutOfRangeError("r must be nonnegative and finite");
  }
  if (absl::Status s = ValidateSpherical(config); !s.ok()) return s;
  const int d = u.dimension();
  if (absl::Status s = ValidateCloud(mu, d); !s.ok()) return s;
  if (r == 0.0) return GradientForm(u, mu).value;
  absl::StatusOr<std::vector<Direction>> dirs =
      SphereRule(d, config.quad.directions);
  if (!dirs.ok()) return dirs.status();
  absl::StatusOr<double> area = SphereArea(d);
  if (!area.ok()) return area.status();

  std::vector<double> per_sample(mu.size());
  ParallelFor(mu.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double total = 0.0;
      for (const Direction& dir : *dirs) {
        const double q =
            r <= config.s_quadrature_limit
                ? AveragedSlope(u, mu.at(i), dir.theta, r, config.panel_width)
                : Difference(u, mu.at(i), dir.theta, r);
        total += dir.weight * q * q;
      }
      per_sample[i] = d / *area * total;
    }
  });
  return EstimateMean(per_sample).mean;
}

absl::StatusOr<DirichletEstimate> ReconstructFromSpherical(
    const TestFunction& u, const SampleCloud& mu, double alpha,
    const SphericalConfig& config) {
  if (absl::Status s = ValidateSpherical(config); !s.ok()) return s;
  // K/2 int J(r) r^(1-alpha) dr with K = C |S| / d unrolls to the same
  // weights as the direct form; only the slope evaluation differs.
  return NonlocalForm(
      u, mu, alpha, config.quad,
      [&u, &config](std::span<const double> x, std::span<const double> theta,
                    double r) {
        return r <= config.s_quadrature_limit
                   ? AveragedSlope(u, x, theta, r, config.panel_width)
                   : Difference(u, x, theta, r);
      });
}

double BregmanGap(double a, double b, double beta) {
  const double bregman_beta = std::pow(a, beta) +
                              (beta - 1.0) * std::pow(b, beta) -
                              beta * a * std::pow(b, beta - 1.0);
  const double diff = std::pow(a, 0.5 * beta) - std::pow(b, 0.5 * beta);
  return bregman_beta - diff * diff;
}

absl::StatusOr<PoincareCheck> CheckFractionalPoincare(
    const SampleCloud& mu, const TestFunction& f, const PoincareConstants& c,
    double alpha, const QuadratureConfig& quad) {
  if (absl::Status s = ValidateConstants(c); !s.ok()) return s;
  if (absl::Status s = ValidateFractionalIndex(alpha); !s.ok()) return s;
  if (absl::Status s = ValidateCloud(mu, f.dimension()); !s.ok()) return s;
  const std::size_t n = mu.size();
  if (n < 2) return absl::InvalidArgumentError("need at least two samples");

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = f.Value(mu.at(i));
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const bool constant = *min_it == *max_it;
  const double mean = EstimateMean(values).mean;
  const double unbias = static_cast<double>(n) / static_cast<double>(n - 1);

  std::vector<double> margin(n, 0.0);
  PoincareCheck out;
  if (c.frac > 0.0) {
    absl::StatusOr<DirichletEstimate> frac = DirichletForm(f, mu, alpha, quad);
    if (!frac.ok()) return frac.status();
    for (std::size_t i = 0; i < n; ++i) {
      margin[i] += 2.0 * c.frac * frac->per_sample[i];
    }
    out.rhs += 2.0 * c.frac * frac->value;
    out.truncation_error = 2.0 * c.frac * frac->truncation_error;
  }
  if (c.gauss > 0.0) {
    const DirichletEstimate grad = GradientForm(f, mu);
    for (std::size_t i = 0; i < n; ++i) {
      margin[i] += c.gauss * grad.per_sample[i];
    }
    out.rhs += c.gauss * grad.value;
  }
  std::vector<double> centered(n, 0.0);
  if (!constant) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = values[i] - mean;
      centered[i] = unbias * dev * dev;
      margin[i] -= centered[i];
    }
  }
  out.lhs = constant ? 0.0 : EstimateMean(centered).mean;
  const MeanEstimate m = EstimateMean(margin);
  out.margin = out.rhs - out.lhs;
  out.mc_error = m.standard_error;
  return out;
}

absl::StatusOr<std::vector<FlowRow>> FlowCheck(const FlowConfig& config) {
  absl::StatusOr<Ensemble> ensemble = RunEnsemble(
      config.pair, config.sim, config.checkpoints, config.trajectories);
  if (!ensemble.ok()) return ensemble.status();
  if (ensemble->d != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("flow check needs d = 1, got d = ", ensemble->d));
  }
  absl::StatusOr<NoiseMode> mode = ClassifyNoise(config.sim.noise);
  if (!mode.ok()) return mode.status();

  AccountingParams params;
  params.n = static_cast<int64_t>(config.pair.s.points.size());
  params.d = 1;
  params.beta = config.beta;
  params.sensitivity = config.sensitivity;
  params.gamma = config.gamma;
  params.radius = config.radius;
  params.noise = config.sim.noise;

  const SimulationConfig& sim = config.sim;
  const bool linear_gaussian =
      sim.loss.family == LossFamily::kQuadratic &&
      sim.batch == static_cast<int64_t>(params.n) &&
      !sim.projection_radius.has_value() && sim.noise.sigma_alpha == 0.0 &&
      sim.noise.sigma_2 > 0.0;
  double mean_gap_drive = 0.0;  // mean(z) - mean(z')
  if (linear_gaussian) {
    for (std::size_t i = 0; i < config.pair.s.points.size(); ++i) {
      mean_gap_drive +=
          config.pair.s.points[i][0] - config.pair.s_prime.points[i][0];
    }
    mean_gap_drive /= static_cast<double>(params.n);
  }
  const double v0 = sim.init.kind == InitialDistribution::Kind::kGaussian
                        ? sim.init.scale * sim.init.scale
                        : 0.0;

  std::vector<FlowRow> rows;
  for (std::size_t c = 0; c < ensemble->checkpoints.size(); ++c) {
    FlowRow row;
    row.step = ensemble->checkpoints[c];
    row.t = static_cast<double>(row.step) * sim.eta;
    row.conditional_on_radius = *mode == NoiseMode::kPureJump;
    const std::vector<double> p = ensemble->Marginal(c, false);
    const std::vector<double> q = ensemble->Marginal(c, true);
    absl::StatusOr<RenyiEstimate> est =
        EstimateRenyi(p, q, config.beta, config.renyi);
    if (!est.ok()) return est.status();
    row.kappa_hat = est->kappa;
    absl::StatusOr<AccountingResult> bound =
        ComputeBound(params, Horizon::Discrete(row.step, sim.eta));
    if (!bound.ok()) return bound.status();
    row.kappa_bound = bound->guarantee.kappa;
    row.linear_bound = bound->linear_value;
    if (linear_gaussian) {
      const double contraction = 1.0 - sim.eta;
      const double k = static_cast<double>(row.step);
      const double gap =
          mean_gap_drive * (1.0 - std::pow(contraction, k));
      const double shrink = std::pow(contraction, 2.0 * k);
      const double var =
          v0 * shrink + sim.noise.sigma_2 * sim.noise.sigma_2 * 2.0 *
                            sim.eta * (1.0 - shrink) /
                            (1.0 - contraction * contraction);
      row.closed_form =
          var > 0.0 ? config.beta * gap * gap / (2.0 * var) : 0.0;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace levydp
