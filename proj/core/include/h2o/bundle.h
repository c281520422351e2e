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

// Dense interaction maps exchanged between a model and the decoder.
//
// Three planes share the anchor layout of GridShape (levels concatenated,
// row-major in (y, x, anchor)), each with its own channel count:
//
//   verb        2V channels: active voice 0..V-1, passive voice V..2V-1
//   presence    V channels
//   embedding   T channels
//
// The plane element of (anchor, channel) is at anchor * channels + channel.
//
// On disk a bundle is the line "H2ODM1", one line of JSON metadata, then for
// each level in order its verb, presence and embedding planes as
// little-endian IEEE-754 float32.

#ifndef H2O_BUNDLE_H_
#define H2O_BUNDLE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "h2o/anchors.h"
#include "h2o/geometry.h"
#include "h2o/losses.h"

namespace h2o {

inline constexpr std::string_view kBundleMagic = "H2ODM1";

class DenseMapBundle {
 public:
  DenseMapBundle() = default;
  // Zero-filled planes.
  DenseMapBundle(GridShape shape, int num_verbs, int embedding_dim);

  const GridShape& shape() const { return shape_; }
  int num_verbs() const { return num_verbs_; }
  int embedding_dim() const { return embedding_dim_; }
  int verb_channels() const { return 2 * num_verbs_; }

  ImageId image_id() const { return image_id_; }
  void set_image_id(ImageId id) { image_id_ = id; }

  std::span<float> verb() { return verb_; }
  std::span<const float> verb() const { return verb_; }
  std::span<float> presence() { return presence_; }
  std::span<const float> presence() const { return presence_; }
  std::span<float> embedding() { return embedding_; }
  std::span<const float> embedding() const { return embedding_; }

  // Channels of one anchor.
  std::span<const float> VerbAt(std::int64_t anchor) const;
  std::span<const float> PresenceAt(std::int64_t anchor) const;
  std::span<const float> EmbeddingAt(std::int64_t anchor) const;
  std::span<float> VerbAt(std::int64_t anchor);
  std::span<float> PresenceAt(std::int64_t anchor);
  std::span<float> EmbeddingAt(std::int64_t anchor);

  // Throws StructuralError unless every plane has the size implied by the
  // shape, probabilities lie in [0, 1] and all values are finite.
  void Validate() const;

  friend bool operator==(const DenseMapBundle&, const DenseMapBundle&) =
      default;

 private:
  GridShape shape_;
  int num_verbs_ = 0;
  int embedding_dim_ = 0;
  ImageId image_id_ = 0;
  std::vector<float> verb_;
  std::vector<float> presence_;
  std::vector<float> embedding_;
};

std::vector<double> ToDouble(std::span<const float> values);

struct InteractionLossBreakdown {
  double focal = 0.0;
  double presence = 0.0;
  double pull = 0.0;
  double push = 0.0;
  double total = 0.0;
};

// Weighted sum of the three interaction losses of `bundle` against
// `assignment`. The embedding term is 0 when the assignment has no groups.
InteractionLossBreakdown InteractionLoss(const DenseMapBundle& bundle,
                                         const Assignment& assignment,
                                         const LossWeights& weights = {},
                                         const FocalParams& focal = {},
                                         double margin = 1.0);

std::string SerializeBundle(const DenseMapBundle& bundle);
DenseMapBundle ParseBundle(std::string_view bytes);
void WriteBundle(const DenseMapBundle& bundle,
                 const std::filesystem::path& path);
DenseMapBundle ReadBundle(const std::filesystem::path& path);

// Detections document: a JSON array of
//   {"image_id", "bbox": [x, y, w, h], "class", "score",
//    "anchor_ref": [level, y, x, anchor] | null}
std::string SerializeDetections(const std::vector<Detection>& detections);
std::vector<Detection> ParseDetections(std::string_view text);
void WriteDetections(const std::vector<Detection>& detections,
                     const std::filesystem::path& path);
std::vector<Detection> ReadDetections(const std::filesystem::path& path);

}  // namespace h2o

#endif  // H2O_BUNDLE_H_
