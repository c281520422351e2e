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

// Ground-truth and prediction data model.
//
// Boxes are absolute pixels with a top-left origin, stored as (x, y, w, h).

#ifndef H2O_TYPES_H_
#define H2O_TYPES_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace h2o {

using ImageId = std::int64_t;
using InstanceId = std::int64_t;

inline constexpr std::string_view kPersonClass = "person";
inline constexpr std::string_view kOtherClass = "other";

struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }
  double center_x() const { return x + 0.5 * w; }
  double center_y() const { return y + 0.5 * h; }

  // Finite coordinates and strictly positive size.
  bool IsValid() const;

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Intersection of `box` with [0, width] x [0, height]. The result may be
// degenerate when the box lies outside the image.
BBox ClampToImage(const BBox& box, double width, double height);

struct Instance {
  InstanceId id = 0;
  ImageId image_id = 0;
  BBox bbox;
  std::string class_name;

  bool is_person() const { return class_name == kPersonClass; }

  friend bool operator==(const Instance&, const Instance&) = default;
};

// One <subject, verb, target> triplet, optionally with an instrument.
struct InteractionAnnotation {
  InstanceId subject_id = 0;
  std::string verb;
  std::optional<InstanceId> target_id;
  std::optional<InstanceId> instrument_id;

  friend bool operator==(const InteractionAnnotation&,
                         const InteractionAnnotation&) = default;
};

struct Scene {
  ImageId image_id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  std::vector<Instance> instances;
  std::vector<InteractionAnnotation> interactions;

  // nullptr when no instance carries `id`.
  const Instance* FindInstance(InstanceId id) const;

  friend bool operator==(const Scene&, const Scene&) = default;
};

struct PredictedTriplet {
  ImageId image_id = 0;
  BBox subject_box;
  std::string verb;
  std::optional<BBox> target_box;
  std::optional<std::string> target_class;
  std::optional<BBox> instrument_box;
  double score = 0.0;

  friend bool operator==(const PredictedTriplet&,
                         const PredictedTriplet&) = default;
};

// Set of object class names a detector is trained on. Targets whose class is
// outside the registry are written as "other".
class ClassRegistry {
 public:
  ClassRegistry() = default;
  explicit ClassRegistry(std::set<std::string> names)
      : names_(std::move(names)) {}

  // The 80 COCO object categories.
  static const ClassRegistry& Coco();

  bool Contains(std::string_view name) const {
    return names_.find(std::string(name)) != names_.end();
  }
  // Registry member or the "other" catch-all.
  bool Accepts(std::string_view name) const {
    return name == kOtherClass || Contains(name);
  }
  std::size_t size() const { return names_.size(); }
  const std::set<std::string>& names() const { return names_; }

 private:
  std::set<std::string> names_;
};

}  // namespace h2o

#endif  // H2O_TYPES_H_
