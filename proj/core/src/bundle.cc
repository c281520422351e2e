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

#include "h2o/bundle.h"

#include <cmath>

#include "h2o/errors.h"

namespace h2o {

namespace {

std::size_t PlaneSize(const GridShape& shape, int channels) {
  return static_cast<std::size_t>(shape.num_anchors()) *
         static_cast<std::size_t>(channels);
}

void CheckPlane(std::span<const float> plane, std::size_t expected,
                bool probability, const char* name) {
  if (plane.size() != expected) {
    throw StructuralError(std::string("bundle ") + name + " plane has " +
                          std::to_string(plane.size()) + " values, expected " +
                          std::to_string(expected));
  }
  for (std::size_t i = 0; i < plane.size(); ++i) {
    const float value = plane[i];
    if (!std::isfinite(value) ||
        (probability && (value < 0.0f || value > 1.0f))) {
      throw StructuralError(std::string("bundle ") + name + " plane value " +
                            std::to_string(value) + " at " +
                            std::to_string(i) + " is out of range");
    }
  }
}

}  // namespace

DenseMapBundle::DenseMapBundle(GridShape shape, int num_verbs,
                               int embedding_dim)
    : shape_(std::move(shape)),
      num_verbs_(num_verbs),
      embedding_dim_(embedding_dim) {
  if (num_verbs_ <= 0 || embedding_dim_ <= 0) {
    throw StructuralError("bundle needs positive verb and embedding sizes");
  }
  verb_.assign(PlaneSize(shape_, verb_channels()), 0.0f);
  presence_.assign(PlaneSize(shape_, num_verbs_), 0.0f);
  embedding_.assign(PlaneSize(shape_, embedding_dim_), 0.0f);
}

std::span<const float> DenseMapBundle::VerbAt(std::int64_t anchor) const {
  return std::span<const float>(verb_).subspan(
      static_cast<std::size_t>(anchor) * verb_channels(), verb_channels());
}
std::span<const float> DenseMapBundle::PresenceAt(std::int64_t anchor) const {
  return std::span<const float>(presence_).subspan(
      static_cast<std::size_t>(anchor) * num_verbs_, num_verbs_);
}
std::span<const float> DenseMapBundle::EmbeddingAt(std::int64_t anchor) const {
  return std::span<const float>(embedding_).subspan(
      static_cast<std::size_t>(anchor) * embedding_dim_, embedding_dim_);
}
std::span<float> DenseMapBundle::VerbAt(std::int64_t anchor) {
  return std::span<float>(verb_).subspan(
      static_cast<std::size_t>(anchor) * verb_channels(), verb_channels());
}
std::span<float> DenseMapBundle::PresenceAt(std::int64_t anchor) {
  return std::span<float>(presence_).subspan(
      static_cast<std::size_t>(anchor) * num_verbs_, num_verbs_);
}
std::span<float> DenseMapBundle::EmbeddingAt(std::int64_t anchor) {
  return std::span<float>(embedding_).subspan(
      static_cast<std::size_t>(anchor) * embedding_dim_, embedding_dim_);
}

void DenseMapBundle::Validate() const {
  if (num_verbs_ <= 0 || embedding_dim_ <= 0) {
    throw StructuralError("bundle needs positive verb and embedding sizes");
  }
  CheckPlane(verb_, PlaneSize(shape_, verb_channels()), true, "verb");
  CheckPlane(presence_, PlaneSize(shape_, num_verbs_), true, "presence");
  CheckPlane(embedding_, PlaneSize(shape_, embedding_dim_), false, "embedding");
}

std::vector<double> ToDouble(std::span<const float> values) {
  return std::vector<double>(values.begin(), values.end());
}

InteractionLossBreakdown InteractionLoss(const DenseMapBundle& bundle,
                                         const Assignment& assignment,
                                         const LossWeights& weights,
                                         const FocalParams& focal,
                                         double margin) {
  InteractionLossBreakdown out;
  out.focal = FocalLoss(ToDouble(bundle.verb()), bundle.verb_channels(),
                        assignment.verb_labels, focal)
                  .loss;
  out.presence = PresenceLoss(ToDouble(bundle.presence()), bundle.num_verbs(),
                              assignment.presence_labels)
                     .loss;
  if (!assignment.groups.empty()) {
    const PullPushResult embedding =
        PullPushLoss(ToDouble(bundle.embedding()), bundle.embedding_dim(),
                     assignment.groups, margin);
    out.pull = embedding.pull;
    out.push = embedding.push;
  }
  out.total = weights.focal * out.focal + weights.presence * out.presence +
              weights.embedding * (out.pull + out.push);
  return out;
}

}  // namespace h2o
