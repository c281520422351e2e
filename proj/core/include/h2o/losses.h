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

// Loss kernels of the dense interaction branch, with analytic gradients.
//
// Every kernel reads a flat map laid out as [anchor][channel] (the dense
// map layout) and returns the loss together with a gradient of the same
// shape. Kernels are pure; gradient accumulation is sequential in anchor
// order, so results are bit-reproducible.

#ifndef H2O_LOSSES_H_
#define H2O_LOSSES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "h2o/assignment.h"

namespace h2o {

// Lower clamp applied to probabilities before taking logs.
inline constexpr double kProbabilityClamp = 1e-7;

struct FocalParams {
  double alpha = 0.25;
  double gamma = 2.0;
};

struct LossResult {
  double loss = 0.0;
  std::vector<double> gradient;
};

// FL = sum over anchors a in A+ and channels v of
//      -alpha * (1 - q)^gamma * log(q),
// with q = p when v is a positive channel of a and q = 1 - p otherwise.
LossResult FocalLoss(std::span<const double> probs, int channels,
                     std::span<const AnchorLabels> a_plus,
                     const FocalParams& params = {});

// Mean binary cross-entropy over the labeled (anchor, verb) cells.
LossResult PresenceLoss(std::span<const double> probs, int channels,
                        std::span<const PresenceLabels> labels);

struct PullPushResult {
  double pull = 0.0;
  double push = 0.0;
  LossResult total;
};

// pull = mean over groups of the mean squared distance of members to the
//        group mean;
// push = mean over unordered group pairs of max(0, margin - |mean_g -
//        mean_h|)^2.
// Groups list flat anchor indices. Throws StructuralError when there are no
// groups or a group is empty.
PullPushResult PullPushLoss(std::span<const double> embeddings, int dim,
                            const std::vector<std::vector<std::int64_t>>& groups,
                            double margin = 1.0);

struct LossWeights {
  double focal = 1.0;
  double presence = 1.0;
  double embedding = 1.0;
};

}  // namespace h2o

#endif  // H2O_LOSSES_H_
