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

#include "h2o/losses.h"

#include <cmath>
#include <string>

#include "h2o/errors.h"

namespace h2o {

namespace {

void CheckMap(std::span<const double> values, int channels, const char* what) {
  if (channels <= 0 || values.size() % static_cast<std::size_t>(channels) != 0) {
    throw StructuralError(std::string(what) + ": map of " +
                          std::to_string(values.size()) +
                          " values is not a whole number of anchors of " +
                          std::to_string(channels) + " channels");
  }
}

void CheckAnchor(std::int64_t anchor, std::size_t num_anchors,
                 const char* what) {
  if (anchor < 0 || static_cast<std::size_t>(anchor) >= num_anchors) {
    throw StructuralError(std::string(what) + ": anchor " +
                          std::to_string(anchor) + " outside the map");
  }
}

double CheckedProbability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw StructuralError(std::string(what) +
                          ": probability outside [0, 1]: " + std::to_string(p));
  }
  return p;
}

// -log(max(q, clamp)) and its derivative with respect to q.
struct LogTerm {
  double value;
  double derivative;
};

LogTerm NegLog(double q) {
  if (q < kProbabilityClamp) return {-std::log(kProbabilityClamp), 0.0};
  return {-std::log(q), -1.0 / q};
}

}  // namespace

LossResult FocalLoss(std::span<const double> probs, int channels,
                     std::span<const AnchorLabels> a_plus,
                     const FocalParams& params) {
  CheckMap(probs, channels, "focal loss");
  const std::size_t num_anchors = probs.size() / static_cast<std::size_t>(channels);
  LossResult result;
  result.gradient.assign(probs.size(), 0.0);

  for (const AnchorLabels& labels : a_plus) {
    CheckAnchor(labels.anchor, num_anchors, "focal loss");
    const std::size_t base =
        static_cast<std::size_t>(labels.anchor) * static_cast<std::size_t>(channels);
    std::size_t next_positive = 0;
    for (int v = 0; v < channels; ++v) {
      bool positive = false;
      if (next_positive < labels.positive_channels.size() &&
          labels.positive_channels[next_positive] == v) {
        positive = true;
        ++next_positive;
      }
      const double p = CheckedProbability(probs[base + v], "focal loss");
      const double q = positive ? p : 1.0 - p;
      const double one_minus_q = 1.0 - q;
      const LogTerm log_term = NegLog(q);
      const double modulator = params.gamma == 0.0
                                   ? 1.0
                                   : std::pow(one_minus_q, params.gamma);
      result.loss += params.alpha * modulator * log_term.value;

      // d/dq of alpha * (1-q)^gamma * (-log q).
      double d_modulator = 0.0;
      if (params.gamma != 0.0 && one_minus_q > 0.0) {
        d_modulator = -params.gamma * std::pow(one_minus_q, params.gamma - 1.0);
      }
      const double dq = params.alpha * (d_modulator * log_term.value +
                                        modulator * log_term.derivative);
      result.gradient[base + v] = positive ? dq : -dq;
    }
    if (next_positive != labels.positive_channels.size()) {
      throw StructuralError("focal loss: anchor " + std::to_string(labels.anchor) +
                            " has unsorted or out-of-range channels");
    }
  }
  return result;
}

LossResult PresenceLoss(std::span<const double> probs, int channels,
                        std::span<const PresenceLabels> labels) {
  CheckMap(probs, channels, "presence loss");
  const std::size_t num_anchors = probs.size() / static_cast<std::size_t>(channels);
  LossResult result;
  result.gradient.assign(probs.size(), 0.0);
  const std::size_t cells = labels.size() * static_cast<std::size_t>(channels);
  if (cells == 0) return result;
  const double scale = 1.0 / static_cast<double>(cells);

  for (const PresenceLabels& anchor_labels : labels) {
    CheckAnchor(anchor_labels.anchor, num_anchors, "presence loss");
    if (anchor_labels.labels.size() != static_cast<std::size_t>(channels)) {
      throw StructuralError("presence loss: anchor " +
                            std::to_string(anchor_labels.anchor) + " has " +
                            std::to_string(anchor_labels.labels.size()) +
                            " labels, expected " + std::to_string(channels));
    }
    const std::size_t base = static_cast<std::size_t>(anchor_labels.anchor) *
                             static_cast<std::size_t>(channels);
    for (int v = 0; v < channels; ++v) {
      const bool positive = anchor_labels.labels[static_cast<std::size_t>(v)] != 0;
      const double p = CheckedProbability(probs[base + v], "presence loss");
      const LogTerm term = NegLog(positive ? p : 1.0 - p);
      result.loss += scale * term.value;
      result.gradient[base + v] =
          scale * (positive ? term.derivative : -term.derivative);
    }
  }
  return result;
}

PullPushResult PullPushLoss(std::span<const double> embeddings, int dim,
                            const std::vector<std::vector<std::int64_t>>& groups,
                            double margin) {
  CheckMap(embeddings, dim, "pull-push loss");
  if (groups.empty()) throw StructuralError("pull-push loss: no groups");
  const std::size_t num_anchors = embeddings.size() / static_cast<std::size_t>(dim);
  const auto d = static_cast<std::size_t>(dim);
  const std::size_t n_groups = groups.size();

  std::vector<double> means(n_groups * d, 0.0);
  for (std::size_t g = 0; g < n_groups; ++g) {
    if (groups[g].empty()) {
      throw StructuralError("pull-push loss: group " + std::to_string(g) +
                            " is empty");
    }
    for (std::int64_t anchor : groups[g]) {
      CheckAnchor(anchor, num_anchors, "pull-push loss");
      const std::size_t base = static_cast<std::size_t>(anchor) * d;
      for (std::size_t k = 0; k < d; ++k) means[g * d + k] += embeddings[base + k];
    }
    const double inv = 1.0 / static_cast<double>(groups[g].size());
    for (std::size_t k = 0; k < d; ++k) means[g * d + k] *= inv;
  }

  PullPushResult result;
  result.total.gradient.assign(embeddings.size(), 0.0);
  std::vector<double>& grad = result.total.gradient;

  // Pull. The derivative through the group mean vanishes because member
  // offsets from the mean sum to zero.
  const double pull_scale = 1.0 / static_cast<double>(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    const double member_scale =
        pull_scale / static_cast<double>(groups[g].size());
    for (std::int64_t anchor : groups[g]) {
      const std::size_t base = static_cast<std::size_t>(anchor) * d;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = embeddings[base + k] - means[g * d + k];
        result.pull += member_scale * diff * diff;
        grad[base + k] += 2.0 * member_scale * diff;
      }
    }
  }

  // Push, accumulated on the means first.
  if (n_groups > 1) {
    const double pairs = static_cast<double>(n_groups * (n_groups - 1) / 2);
    std::vector<double> mean_grad(n_groups * d, 0.0);
    for (std::size_t g = 0; g < n_groups; ++g) {
      for (std::size_t h = g + 1; h < n_groups; ++h) {
        double dist2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double diff = means[g * d + k] - means[h * d + k];
          dist2 += diff * diff;
        }
        const double dist = std::sqrt(dist2);
        const double gap = margin - dist;
        if (gap <= 0.0) continue;
        result.push += gap * gap / pairs;
        // Coincident means have no defined push direction; the subgradient 0
        // is used.
        if (dist == 0.0) continue;
        const double coeff = -2.0 * gap / (pairs * dist);
        for (std::size_t k = 0; k < d; ++k) {
          const double diff = means[g * d + k] - means[h * d + k];
          mean_grad[g * d + k] += coeff * diff;
          mean_grad[h * d + k] -= coeff * diff;
        }
      }
    }
    for (std::size_t g = 0; g < n_groups; ++g) {
      const double inv = 1.0 / static_cast<double>(groups[g].size());
      for (std::int64_t anchor : groups[g]) {
        const std::size_t base = static_cast<std::size_t>(anchor) * d;
        for (std::size_t k = 0; k < d; ++k) {
          grad[base + k] += inv * mean_grad[g * d + k];
        }
      }
    }
  }
  result.total.loss = result.pull + result.push;
  return result;
}

}  // namespace h2o
