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

#ifndef H2O_GEOMETRY_H_
#define H2O_GEOMETRY_H_

#include <optional>
#include <string>
#include <vector>

#include "h2o/types.h"

namespace h2o {

// Position of one anchor on a multi-level grid.
struct AnchorRef {
  int level = 0;
  int y = 0;
  int x = 0;
  int anchor = 0;

  friend bool operator==(const AnchorRef&, const AnchorRef&) = default;
};

struct Detection {
  BBox bbox;
  std::string class_name;
  double score = 0.0;
  std::optional<AnchorRef> anchor_ref;
  // Image the detection belongs to. Only used by file I/O and batching.
  ImageId image_id = 0;

  bool is_person() const { return class_name == kPersonClass; }

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Continuous-area intersection over union; 0 for disjoint boxes.
double Iou(const BBox& a, const BBox& b);

struct NmsConfig {
  double iou_threshold = 0.5;
  double score_floor = 0.05;
  int max_detections = 100;
};

// Greedy class-wise suppression: a detection is dropped when a kept
// detection of the same class with a higher rank overlaps it with
// IoU > iou_threshold. Rank is descending score, then class name, then
// input index; the result is returned in rank order. Persons and objects
// never suppress each other.
std::vector<Detection> Nms(const std::vector<Detection>& detections,
                           double iou_threshold);

// Score floor, then Nms(), then truncation to max_detections.
std::vector<Detection> SelectDetections(const std::vector<Detection>& dets,
                                        const NmsConfig& config);

}  // namespace h2o

#endif  // H2O_GEOMETRY_H_
