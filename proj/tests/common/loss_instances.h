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
// Random inputs for the loss kernels, shared by the unit tests and the
// acceptance runner.

#ifndef H2O_TESTS_COMMON_LOSS_INSTANCES_H_
#define H2O_TESTS_COMMON_LOSS_INSTANCES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "h2o/assignment.h"

namespace h2o::testing {

struct FocalInstance {
  int channels = 0;
  std::vector<double> probs;
  std::vector<AnchorLabels> a_plus;
  // Flat coordinates inside A+ anchors.
  std::vector<std::size_t> coordinates;
};

inline FocalInstance RandomFocalInstance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> n_anchors(3, 12);
  std::uniform_int_distribution<int> n_channels(2, 10);
  std::uniform_real_distribution<double> prob(0.01, 0.99);
  FocalInstance out;
  const int anchors = n_anchors(rng);
  out.channels = n_channels(rng);
  for (int i = 0; i < anchors * out.channels; ++i) out.probs.push_back(prob(rng));
  for (int a = 0; a < anchors; ++a) {
    if (std::bernoulli_distribution(0.6)(rng) || a == 0) {
      AnchorLabels labels;
      labels.anchor = a;
      for (int c = 0; c < out.channels; ++c) {
        if (std::bernoulli_distribution(0.3)(rng)) {
          labels.positive_channels.push_back(c);
        }
        out.coordinates.push_back(static_cast<std::size_t>(a * out.channels + c));
      }
      out.a_plus.push_back(labels);
    }
  }
  return out;
}

struct PresenceInstance {
  int channels = 0;
  std::vector<double> probs;
  std::vector<PresenceLabels> labels;
  std::vector<std::size_t> coordinates;
};

inline PresenceInstance RandomPresenceInstance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> prob(0.01, 0.99);
  PresenceInstance out;
  const int anchors = std::uniform_int_distribution<int>(2, 10)(rng);
  out.channels = std::uniform_int_distribution<int>(1, 8)(rng);
  for (int i = 0; i < anchors * out.channels; ++i) out.probs.push_back(prob(rng));
  for (int a = 0; a < anchors; a += 1 + static_cast<int>(rng() % 2)) {
    PresenceLabels labels;
    labels.anchor = a;
    for (int c = 0; c < out.channels; ++c) {
      labels.labels.push_back(std::bernoulli_distribution(0.5)(rng) ? 1 : 0);
      out.coordinates.push_back(static_cast<std::size_t>(a * out.channels + c));
    }
    out.labels.push_back(labels);
  }
  return out;
}

struct EmbeddingInstance {
  int dim = 0;
  double margin = 1.0;
  std::vector<double> embeddings;
  std::vector<std::vector<std::int64_t>> groups;
  std::vector<std::size_t> coordinates;
};

// Group means stay at least 0.05 away from the hinge kink at distance
// `margin` and from coinciding, where the push term is not differentiable.
inline EmbeddingInstance RandomEmbeddingInstance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  while (true) {
    EmbeddingInstance out;
    out.dim = std::uniform_int_distribution<int>(1, 6)(rng);
    out.margin = 1.0;
    const int n_groups = std::uniform_int_distribution<int>(1, 5)(rng);
    std::normal_distribution<double> noise(0.0, 0.7);
    std::int64_t anchor = 0;
    for (int g = 0; g < n_groups; ++g) {
      std::vector<std::int64_t> members;
      const int size = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int k = 0; k < size; ++k) members.push_back(anchor++);
      out.groups.push_back(members);
    }
    const std::int64_t unused = std::uniform_int_distribution<int>(0, 3)(rng);
    const std::int64_t total = anchor + unused;
    for (std::int64_t i = 0; i < total * out.dim; ++i) {
      out.embeddings.push_back(noise(rng));
    }
    for (std::int64_t i = 0; i < anchor * out.dim; ++i) {
      out.coordinates.push_back(static_cast<std::size_t>(i));
    }
    bool smooth = true;
    std::vector<std::vector<double>> means;
    for (const auto& members : out.groups) {
      std::vector<double> mean(static_cast<std::size_t>(out.dim), 0.0);
      for (std::int64_t a : members) {
        for (int k = 0; k < out.dim; ++k) {
          mean[static_cast<std::size_t>(k)] +=
              out.embeddings[static_cast<std::size_t>(a * out.dim + k)] /
              static_cast<double>(members.size());
        }
      }
      means.push_back(mean);
    }
    for (std::size_t g = 0; g < means.size(); ++g) {
      for (std::size_t h = g + 1; h < means.size(); ++h) {
        double d2 = 0.0;
        for (int k = 0; k < out.dim; ++k) {
          const double diff = means[g][static_cast<std::size_t>(k)] -
                              means[h][static_cast<std::size_t>(k)];
          d2 += diff * diff;
        }
        const double d = std::sqrt(d2);
        if (std::abs(d - out.margin) < 0.05 || d < 0.05) smooth = false;
      }
    }
    if (smooth) return out;
  }
}

}  // namespace h2o::testing

#endif  // H2O_TESTS_COMMON_LOSS_INSTANCES_H_
