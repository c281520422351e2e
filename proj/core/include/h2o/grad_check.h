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

#ifndef H2O_GRAD_CHECK_H_
#define H2O_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "h2o/losses.h"

namespace h2o {

using LossKernel = std::function<LossResult(std::span<const double>)>;

struct GradCheckOptions {
  // Central-difference step, in (0, 1e-2].
  double epsilon = 1e-5;
  int num_samples = 200;
  std::uint64_t seed = 0;
  // When non-empty, coordinates are drawn from this list instead of the
  // whole input.
  std::vector<std::size_t> candidates;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_coordinate = 0;
  int samples = 0;
};

// |analytic - numeric| / max(|analytic|, |numeric|, 1e-7) at randomly drawn
// coordinates, with the numeric derivative taken by central differences.
// Coordinates are drawn with replacement. Throws std::invalid_argument for
// an epsilon outside (0, 1e-2].
GradCheckResult GradCheck(const LossKernel& kernel,
                          std::span<const double> input,
                          const GradCheckOptions& options = {});

}  // namespace h2o

#endif  // H2O_GRAD_CHECK_H_
