// Copyright 2026 The H2O Toolkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "h2o/grad_check.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace h2o {

GradCheckResult GradCheck(const LossKernel& kernel,
                          std::span<const double> input,
                          const GradCheckOptions& options) {
  if (!(options.epsilon > 0.0 && options.epsilon <= 1e-2)) {
    throw std::invalid_argument("grad check epsilon must lie in (0, 1e-2]");
  }
  GradCheckResult result;
  if (input.empty() || options.num_samples <= 0) return result;

  const LossResult analytic = kernel(input);
  if (analytic.gradient.size() != input.size()) {
    throw std::invalid_argument("gradient size does not match input size");
  }

  std::mt19937_64 rng(options.seed);
  const std::size_t pool = options.candidates.empty()
                               ? input.size()
                               : options.candidates.size();
  std::uniform_int_distribution<std::size_t> pick(0, pool - 1);

  std::vector<double> probe(input.begin(), input.end());
  for (int s = 0; s < options.num_samples; ++s) {
    const std::size_t drawn = pick(rng);
    const std::size_t coord =
        options.candidates.empty() ? drawn : options.candidates[drawn];
    const double saved = probe[coord];
    probe[coord] = saved + options.epsilon;
    const double plus = kernel(probe).loss;
    probe[coord] = saved - options.epsilon;
    const double minus = kernel(probe).loss;
    probe[coord] = saved;

    const double numeric = (plus - minus) / (2.0 * options.epsilon);
    const double exact = analytic.gradient[coord];
    const double scale =
        std::max({std::abs(exact), std::abs(numeric), 1e-7});
    const double error = std::abs(exact - numeric) / scale;
    if (error > result.max_relative_error || result.samples == 0) {
      result.max_relative_error = error;
      result.worst_coordinate = coord;
    }
    ++result.samples;
  }
  return result;
}

}  // namespace h2o
