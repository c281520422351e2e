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

#include "h2o/stats.h"

#include "json.hpp"

namespace h2o {

double DatasetStats::persons_per_image() const {
  return n_images == 0 ? 0.0
                       : static_cast<double>(n_persons) /
                             static_cast<double>(n_images);
}

double DatasetStats::objects_per_image() const {
  return n_images == 0 ? 0.0
                       : static_cast<double>(n_objects) /
                             static_cast<double>(n_images);
}

DatasetStats& DatasetStats::operator+=(const DatasetStats& other) {
  n_images += other.n_images;
  n_persons += other.n_persons;
  n_objects += other.n_objects;
  n_interactions += other.n_interactions;
  for (std::size_t i = 0; i < interactions_per_category.size(); ++i) {
    interactions_per_category[i] += other.interactions_per_category[i];
  }
  return *this;
}

DatasetStats operator+(DatasetStats a, const DatasetStats& b) {
  a += b;
  return a;
}

DatasetStats ComputeStats(const std::vector<Scene>& scenes,
                          const Taxonomy& taxonomy) {
  DatasetStats stats;
  stats.n_images = static_cast<std::int64_t>(scenes.size());
  for (const Scene& scene : scenes) {
    for (const Instance& instance : scene.instances) {
      ++(instance.is_person() ? stats.n_persons : stats.n_objects);
    }
    for (const InteractionAnnotation& ann : scene.interactions) {
      const Verb& verb = taxonomy.Get(ann.verb);
      ++stats.interactions_per_category[static_cast<std::size_t>(
          verb.category)];
      ++stats.n_interactions;
    }
  }
  return stats;
}

std::string StatsToJson(const DatasetStats& stats) {
  nlohmann::ordered_json doc;
  doc["n_images"] = stats.n_images;
  doc["n_persons"] = stats.n_persons;
  doc["n_objects"] = stats.n_objects;
  doc["n_interactions"] = stats.n_interactions;
  nlohmann::ordered_json per_category;
  for (Category category : kAllCategories) {
    per_category[std::string(CategoryName(category))] =
        stats.interactions_in(category);
  }
  doc["interactions_per_category"] = std::move(per_category);
  doc["persons_per_image"] = stats.persons_per_image();
  doc["objects_per_image"] = stats.objects_per_image();
  return doc.dump(2) + "\n";
}

}  // namespace h2o
