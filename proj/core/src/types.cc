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

#include "h2o/types.h"

#include <algorithm>
#include <cmath>

namespace h2o {

bool BBox::IsValid() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) &&
         std::isfinite(h) && w > 0.0 && h > 0.0;
}

BBox ClampToImage(const BBox& box, double width, double height) {
  // Recomputing w and h from the corners is not exact in floating point.
  if (box.x >= 0.0 && box.y >= 0.0 && box.right() <= width &&
      box.bottom() <= height) {
    return box;
  }
  const double x0 = std::clamp(box.x, 0.0, width);
  const double y0 = std::clamp(box.y, 0.0, height);
  const double x1 = std::clamp(box.right(), 0.0, width);
  const double y1 = std::clamp(box.bottom(), 0.0, height);
  return BBox{x0, y0, x1 - x0, y1 - y0};
}

const Instance* Scene::FindInstance(InstanceId id) const {
  for (const Instance& instance : instances) {
    if (instance.id == id) return &instance;
  }
  return nullptr;
}

const ClassRegistry& ClassRegistry::Coco() {
  static const ClassRegistry* const kCoco = new ClassRegistry({
      "person",        "bicycle",      "car",           "motorcycle",
      "airplane",      "bus",          "train",         "truck",
      "boat",          "traffic light", "fire hydrant", "stop sign",
      "parking meter", "bench",        "bird",          "cat",
      "dog",           "horse",        "sheep",         "cow",
      "elephant",      "bear",         "zebra",         "giraffe",
      "backpack",      "umbrella",     "handbag",       "tie",
      "suitcase",      "frisbee",      "skis",          "snowboard",
      "sports ball",   "kite",         "baseball bat",  "baseball glove",
      "skateboard",    "surfboard",    "tennis racket", "bottle",
      "wine glass",    "cup",          "fork",          "knife",
      "spoon",         "bowl",         "banana",        "apple",
      "sandwich",      "orange",       "broccoli",      "carrot",
      "hot dog",       "pizza",        "donut",         "cake",
      "chair",         "couch",        "potted plant",  "bed",
      "dining table",  "toilet",       "tv",            "laptop",
      "mouse",         "remote",       "keyboard",      "cell phone",
      "microwave",     "oven",         "toaster",       "sink",
      "refrigerator",  "book",         "clock",         "vase",
      "scissors",      "teddy bear",   "hair drier",    "toothbrush",
  });
  return *kCoco;
}

}  // namespace h2o
