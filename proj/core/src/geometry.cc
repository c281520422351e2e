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

#include "h2o/geometry.h"

#include <algorithm>
#include <map>
#include <numeric>

namespace h2o {

double Iou(const BBox& a, const BBox& b) {
  const double ix = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::min(1.0, inter / uni);
}

std::vector<Detection> Nms(const std::vector<Detection>& detections,
                           double iou_threshold) {
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto ranks_before = [&](std::size_t i, std::size_t j) {
    const Detection& a = detections[i];
    const Detection& b = detections[j];
    if (a.score != b.score) return a.score > b.score;
    if (a.class_name != b.class_name) return a.class_name < b.class_name;
    return i < j;
  };
  std::sort(order.begin(), order.end(), ranks_before);

  // Kept boxes per class; a candidate only has to be checked against the
  // already kept boxes of its own class.
  std::map<std::string, std::vector<std::size_t>, std::less<>> kept_by_class;
  std::vector<Detection> kept;
  for (std::size_t index : order) {
    const Detection& candidate = detections[index];
    std::vector<std::size_t>& same_class = kept_by_class[candidate.class_name];
    const bool suppressed =
        std::any_of(same_class.begin(), same_class.end(), [&](std::size_t k) {
          return Iou(detections[k].bbox, candidate.bbox) > iou_threshold;
        });
    if (suppressed) continue;
    same_class.push_back(index);
    kept.push_back(candidate);
  }
  return kept;
}

std::vector<Detection> SelectDetections(const std::vector<Detection>& dets,
                                        const NmsConfig& config) {
  std::vector<Detection> scored;
  scored.reserve(dets.size());
  for (const Detection& det : dets) {
    if (det.score >= config.score_floor) scored.push_back(det);
  }
  std::vector<Detection> kept = Nms(scored, config.iou_threshold);
  if (config.max_detections >= 0 &&
      kept.size() > static_cast<std::size_t>(config.max_detections)) {
    kept.resize(static_cast<std::size_t>(config.max_detections));
  }
  return kept;
}

}  // namespace h2o
