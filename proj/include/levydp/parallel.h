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

#ifndef LEVYDP_PARALLEL_H_
#define LEVYDP_PARALLEL_H_

#include <cstddef>
#include <functional>
#include <span>

namespace levydp {

// Worker count: LEVYDP_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int WorkerCount();

// Runs body(begin, end) over a static partition of [0, count). Work items
// must write only to their own slots; results are then independent of the
// number of workers.
void ParallelFor(std::size_t count,
                 const std::function<void(std::size_t, std::size_t)>& body);

// Sum in a fixed binary tree, so the rounding pattern depends only on the
// length of the input.
double PairwiseSum(std::span<const double> values);

// Mean and standard error of the mean, both via PairwiseSum.
struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};
MeanEstimate EstimateMean(std::span<const double> values);

}  // namespace levydp

#endif  // LEVYDP_PARALLEL_H_
