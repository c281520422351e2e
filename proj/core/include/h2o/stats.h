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

#ifndef H2O_STATS_H_
#define H2O_STATS_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "h2o/taxonomy.h"
#include "h2o/types.h"

namespace h2o {

struct DatasetStats {
  std::int64_t n_images = 0;
  std::int64_t n_persons = 0;
  std::int64_t n_objects = 0;
  std::int64_t n_interactions = 0;
  // Indexed by Category.
  std::array<std::int64_t, kAllCategories.size()> interactions_per_category{};

  // 0 for an empty dataset.
  double persons_per_image() const;
  double objects_per_image() const;

  std::int64_t interactions_in(Category category) const {
    return interactions_per_category[static_cast<std::size_t>(category)];
  }

  // Counts of the concatenation of the two underlying datasets.
  DatasetStats& operator+=(const DatasetStats& other);

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

DatasetStats operator+(DatasetStats a, const DatasetStats& b);

// Exact counts over `scenes`. Throws StructuralError on unknown verbs.
DatasetStats ComputeStats(const std::vector<Scene>& scenes,
                          const Taxonomy& taxonomy = BuiltinTaxonomy());

// Pretty-printed JSON document with every count and ratio.
std::string StatsToJson(const DatasetStats& stats);

}  // namespace h2o

#endif  // H2O_STATS_H_
