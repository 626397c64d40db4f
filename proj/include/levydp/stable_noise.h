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

#ifndef LEVYDP_STABLE_NOISE_H_
#define LEVYDP_STABLE_NOISE_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace levydp {

// Derives the seed of stream `index` from a base seed. The mapping is a
// splitmix64 finalizer over (base, index) and is part of the reproducibility
// contract: changing it changes every simulated trajectory.
uint64_t SplitSeed(uint64_t base, uint64_t index);

// Single-owner random stream. Uniforms are built from the top 53 bits of a
// mt19937_64 draw, so they are identical across standard libraries.
class NoiseStream {
 public:
  explicit NoiseStream(uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1).
  double Uniform();
  // Standard exponential.
  double Exponential();
  double Gaussian() { return normal_(engine_); }
  // Uniform integer in [0, bound).
  uint64_t Below(uint64_t bound);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// Positive (one-sided) stable law with Laplace transform
// E exp(-u A) = exp(-u^alpha_prime), 0 < alpha_prime < 1.
//
// Drawn with the Chambers-Mallows-Stuck transform in Kanter's form: for
// U ~ Unif(0, pi) and E ~ Exp(1),
//
//   A = sin(a U) / sin(U)^(1/a) * (sin((1-a) U) / E)^((1-a)/a),
//
// whose Laplace exponent is exactly u^a (no extra scale factor needed).
class PositiveStableSampler {
 public:
  static absl::StatusOr<PositiveStableSampler> Create(double alpha_prime);

  double Sample(NoiseStream& rng) const;
  double alpha_prime() const { return alpha_prime_; }

 private:
  explicit PositiveStableSampler(double alpha_prime)
      : alpha_prime_(alpha_prime) {}
  double alpha_prime_;
};

// Rotationally invariant alpha-stable vectors with characteristic function
// exp(-|xi|^alpha), via subordination X = sqrt(2A) Z with A positive
// (alpha/2)-stable and Z standard Gaussian. Independent coordinates would
// not be isotropic.
class IsotropicStableSampler {
 public:
  static absl::StatusOr<IsotropicStableSampler> Create(double alpha, int d);

  // Writes one d-vector into `out` (out.size() == d).
  void Sample(NoiseStream& rng, std::span<double> out) const;
  std::vector<double> Sample(NoiseStream& rng) const;

  double alpha() const { return 2.0 * subordinator_.alpha_prime(); }
  int dimension() const { return d_; }

 private:
  IsotropicStableSampler(PositiveStableSampler subordinator, int d)
      : subordinator_(subordinator), d_(d) {}
  PositiveStableSampler subordinator_;
  int d_;
};

absl::StatusOr<double> SamplePositiveStable(double alpha_prime,
                                            NoiseStream& rng);
absl::StatusOr<std::vector<double>> SampleIsotropicStable(double alpha, int d,
                                                          NoiseStream& rng);
std::vector<double> SampleGaussian(int d, NoiseStream& rng);

}  // namespace levydp

#endif  // LEVYDP_STABLE_NOISE_H_
