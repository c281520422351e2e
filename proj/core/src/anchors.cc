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

#include "h2o/anchors.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "h2o/errors.h"

namespace h2o {

GridShape::GridShape(std::vector<LevelShape> levels, int anchors_per_cell)
    : levels_(std::move(levels)), anchors_per_cell_(anchors_per_cell) {
  if (levels_.empty()) throw StructuralError("anchor grid has no levels");
  if (anchors_per_cell_ < 1) {
    throw StructuralError("anchor grid needs at least one anchor per cell");
  }
  offsets_.assign(1, 0);
  for (const LevelShape& level : levels_) {
    if (level.stride <= 0 || level.width <= 0 || level.height <= 0) {
      throw StructuralError("anchor grid level must have positive stride and "
                            "size");
    }
    offsets_.push_back(offsets_.back() + level.cells() * anchors_per_cell_);
  }
}

bool GridShape::Contains(const AnchorRef& ref) const {
  if (ref.level < 0 || ref.level >= static_cast<int>(levels_.size())) {
    return false;
  }
  const LevelShape& level = levels_[static_cast<std::size_t>(ref.level)];
  return ref.y >= 0 && ref.y < level.height && ref.x >= 0 &&
         ref.x < level.width && ref.anchor >= 0 &&
         ref.anchor < anchors_per_cell_;
}

std::int64_t GridShape::FlatIndex(const AnchorRef& ref) const {
  if (!Contains(ref)) {
    throw StructuralError(
        "anchor (" + std::to_string(ref.level) + ", " + std::to_string(ref.y) +
        ", " + std::to_string(ref.x) + ", " + std::to_string(ref.anchor) +
        ") lies outside the grid");
  }
  const LevelShape& level = levels_[static_cast<std::size_t>(ref.level)];
  return level_offset(ref.level) +
         (static_cast<std::int64_t>(ref.y) * level.width + ref.x) *
             anchors_per_cell_ +
         ref.anchor;
}

AnchorRef GridShape::RefOf(std::int64_t flat) const {
  if (flat < 0 || flat >= num_anchors()) {
    throw StructuralError("flat anchor index " + std::to_string(flat) +
                          " out of range");
  }
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
  const int level = static_cast<int>(it - offsets_.begin()) - 1;
  const LevelShape& shape = levels_[static_cast<std::size_t>(level)];
  const std::int64_t local = flat - level_offset(level);
  AnchorRef ref;
  ref.level = level;
  ref.anchor = static_cast<int>(local % anchors_per_cell_);
  const std::int64_t cell = local / anchors_per_cell_;
  ref.x = static_cast<int>(cell % shape.width);
  ref.y = static_cast<int>(cell / shape.width);
  return ref;
}

AnchorGrid BuildAnchorGrid(int image_width, int image_height,
                           const AnchorGridConfig& config) {
  if (config.strides.empty()) throw StructuralError("anchor grid has no levels");
  if (config.scales.empty() || config.aspect_ratios.empty()) {
    throw StructuralError("anchor grid needs at least one scale and ratio");
  }
  if (image_width <= 0 || image_height <= 0) {
    throw StructuralError("image size must be positive");
  }
  std::vector<LevelShape> levels;
  for (int stride : config.strides) {
    if (stride <= 0) throw StructuralError("anchor stride must be positive");
    levels.push_back(LevelShape{stride, (image_width + stride - 1) / stride,
                                (image_height + stride - 1) / stride});
  }
  AnchorGrid grid;
  grid.image_width = image_width;
  grid.image_height = image_height;
  grid.shape = GridShape(levels, config.anchors_per_cell());
  grid.boxes.reserve(static_cast<std::size_t>(grid.shape.num_anchors()));

  for (const LevelShape& level : levels) {
    // Anchor shapes are identical for every cell of a level.
    std::vector<std::pair<double, double>> sizes;
    for (double scale : config.scales) {
      for (double ratio : config.aspect_ratios) {
        const double side = config.anchor_scale * level.stride * scale;
        const double root = std::sqrt(ratio);
        sizes.emplace_back(side / root, side * root);
      }
    }
    for (int y = 0; y < level.height; ++y) {
      for (int x = 0; x < level.width; ++x) {
        const double cx = (x + 0.5) * level.stride;
        const double cy = (y + 0.5) * level.stride;
        for (const auto& [w, h] : sizes) {
          grid.boxes.push_back(BBox{cx - 0.5 * w, cy - 0.5 * h, w, h});
        }
      }
    }
  }
  return grid;
}

}  // namespace h2o
