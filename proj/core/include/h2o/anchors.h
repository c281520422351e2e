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

// Multi-level anchor grid.
//
// Level l has a feature map of width W_l = ceil(image_width / stride_l) and
// height H_l = ceil(image_height / stride_l), with A anchors per cell.
// Anchors are enumerated level by level, then row-major over (y, x, a), so
// the flat index of an anchor is also the row index of every dense map.

#ifndef H2O_ANCHORS_H_
#define H2O_ANCHORS_H_

#include <cstdint>
#include <vector>

#include "h2o/geometry.h"
#include "h2o/types.h"

namespace h2o {

struct LevelShape {
  int stride = 0;
  int width = 0;
  int height = 0;

  std::int64_t cells() const {
    return static_cast<std::int64_t>(width) * height;
  }
  friend bool operator==(const LevelShape&, const LevelShape&) = default;
};

class GridShape {
 public:
  GridShape() = default;
  // Throws StructuralError on empty levels, non-positive sizes or A < 1.
  GridShape(std::vector<LevelShape> levels, int anchors_per_cell);

  const std::vector<LevelShape>& levels() const { return levels_; }
  int anchors_per_cell() const { return anchors_per_cell_; }
  std::int64_t num_anchors() const { return offsets_.back(); }
  // Flat index of the first anchor of `level`.
  std::int64_t level_offset(int level) const {
    return offsets_[static_cast<std::size_t>(level)];
  }
  std::int64_t level_anchors(int level) const {
    return offsets_[static_cast<std::size_t>(level) + 1] -
           offsets_[static_cast<std::size_t>(level)];
  }

  bool Contains(const AnchorRef& ref) const;
  // Throws StructuralError when `ref` lies outside the grid.
  std::int64_t FlatIndex(const AnchorRef& ref) const;
  AnchorRef RefOf(std::int64_t flat) const;

  friend bool operator==(const GridShape& a, const GridShape& b) {
    return a.levels_ == b.levels_ && a.anchors_per_cell_ == b.anchors_per_cell_;
  }

 private:
  std::vector<LevelShape> levels_;
  int anchors_per_cell_ = 0;
  std::vector<std::int64_t> offsets_{0};
};

struct AnchorGridConfig {
  std::vector<int> strides = {8, 16, 32, 64, 128};
  // Size multipliers within one octave.
  std::vector<double> scales = {1.0, 1.2599210498948732, 1.5874010519681994};
  // Height / width.
  std::vector<double> aspect_ratios = {0.5, 1.0, 2.0};
  // Base anchor side is anchor_scale * stride.
  double anchor_scale = 4.0;

  int anchors_per_cell() const {
    return static_cast<int>(scales.size() * aspect_ratios.size());
  }
};

struct AnchorGrid {
  int image_width = 0;
  int image_height = 0;
  GridShape shape;
  // One box per flat anchor index, centered on its cell.
  std::vector<BBox> boxes;

  std::int64_t size() const { return shape.num_anchors(); }
};

// Anchor a within a cell enumerates (scale, ratio) pairs with the ratio
// varying fastest. Throws StructuralError on an empty or invalid config.
AnchorGrid BuildAnchorGrid(int image_width, int image_height,
                           const AnchorGridConfig& config);

}  // namespace h2o

#endif  // H2O_ANCHORS_H_
