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

#include "levydp/stable_noise.h"

#include <cmath>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "levydp/constants.h"

namespace levydp {
namespace {

uint64_t Mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// exp(700) is close to the largest finite double; draws beyond it are
// redrawn. The probability of that is far below anything measurable.
constexpr double kMaxLogSample = 700.0;

}  // namespace

uint64_t SplitSeed(uint64_t base, uint64_t index) {
  return Mix(Mix(base + 0x9e3779b97f4a7c15ULL) ^
             (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

double NoiseStream::Uniform() {
  // (k + 0.5) / 2^53 for k uniform in [0, 2^53): never 0 or 1.
  const uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double NoiseStream::Exponential() { return -std::log(Uniform()); }

uint64_t NoiseStream::Below(uint64_t bound) {
  std::uniform_int_distribution<uint64_t> dist(0, bound - 1);
  return dist(engine_);
}

absl::StatusOr<PositiveStableSampler> PositiveStableSampler::Create(
    double alpha_prime) {
  if (!std::isfinite(alpha_prime) || alpha_prime <= 0.0 || alpha_prime >= 1.0) {
    return absl::OutOfRangeError(absl::StrCat(
        "positive stable index must lie in (0, 1), got ", alpha_prime));
  }
  return PositiveStableSampler(alpha_prime);
}

double PositiveStableSampler::Sample(NoiseStream& rng) const {
  const double a = alpha_prime_;
  for (;;) {
    const double u = std::numbers::pi * rng.Uniform();
    const double e = rng.Exponential();
    const double log_a = std::log(std::sin(a * u)) - std::log(std::sin(u)) / a +
                         (1.0 - a) / a *
                             (std::log(std::sin((1.0 - a) * u)) - std::log(e));
    if (std::isfinite(log_a) && log_a < kMaxLogSample) return std::exp(log_a);
  }
}

absl::StatusOr<IsotropicStableSampler> IsotropicStableSampler::Create(
    double alpha, int d) {
  if (absl::Status s = ValidateFractionalIndex(alpha); !s.ok()) return s;
  if (absl::Status s = ValidateDimension(d); !s.ok()) return s;
  absl::StatusOr<PositiveStableSampler> sub =
      PositiveStableSampler::Create(0.5 * alpha);
  if (!sub.ok()) return sub.status();
  return IsotropicStableSampler(*sub, d);
}

void IsotropicStableSampler::Sample(NoiseStream& rng,
                                    std::span<double> out) const {
  const double scale = std::sqrt(2.0 * subordinator_.Sample(rng));
  for (double& x : out) x = scale * rng.Gaussian();
}

std::vector<double> IsotropicStableSampler::Sample(NoiseStream& rng) const {
  std::vector<double> out(static_cast<std::size_t>(d_));
  Sample(rng, out);
  return out;
}

absl::StatusOr<double> SamplePositiveStable(double alpha_prime,
                                            NoiseStream& rng) {
  absl::StatusOr<PositiveStableSampler> sampler =
      PositiveStableSampler::Create(alpha_prime);
  if (!sampler.ok()) return sampler.status();
  return sampler->Sample(rng);
}

absl::StatusOr<std::vector<double>> SampleIsotropicStable(double alpha, int d,
                                                          NoiseStream& rng) {
  absl::StatusOr<IsotropicStableSampler> sampler =
      IsotropicStableSampler::Create(alpha, d);
  if (!sampler.ok()) return sampler.status();
  return sampler->Sample(rng);
}

std::vector<double> SampleGaussian(int d, NoiseStream& rng) {
  std::vector<double> out(static_cast<std::size_t>(d > 0 ? d : 0));
  for (double& x : out) x = rng.Gaussian();
  return out;
}

}  // namespace levydp
