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

#include "h2o/decode_bench.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "h2o/synthgen.h"

namespace h2o {

namespace {

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

DecodeBenchReport BenchDecode(const DecodeBenchConfig& config) {
  if (config.repetitions < 1) {
    throw std::invalid_argument("bench: repetitions must be >= 1");
  }
  const int capacity = std::min(config.persons, config.objects);
  for (int n : config.interactions) {
    if (n < 0 || n > capacity) {
      throw std::invalid_argument("bench: interaction count " +
                                  std::to_string(n) + " outside [0, " +
                                  std::to_string(capacity) + "]");
    }
  }

  const Taxonomy& taxonomy = BuiltinTaxonomy();
  const AnchorGrid grid =
      BuildAnchorGrid(config.image_size, config.image_size, config.grid);
  const int total = config.persons + config.objects;
  const std::vector<AnchorRef> refs =
      PlaceOnAnchors(grid, total, 0.3, config.seed, 100 * total + 1000);

  Scene base;
  base.image_id = 1;
  base.width = config.image_size;
  base.height = config.image_size;
  for (int k = 0; k < total; ++k) {
    Instance instance;
    instance.id = k + 1;
    instance.image_id = base.image_id;
    instance.bbox = grid.boxes[static_cast<std::size_t>(
        grid.shape.FlatIndex(refs[static_cast<std::size_t>(k)]))];
    instance.class_name = k < config.persons ? "person" : "cup";
    base.instances.push_back(std::move(instance));
  }
  const std::vector<int>& object_verbs =
      taxonomy.VerbsIn(Category::kObjectInteraction);

  std::vector<RenderedScene> rendered;
  for (int n : config.interactions) {
    Scene scene = base;
    for (int i = 0; i < n; ++i) {
      scene.interactions.push_back(InteractionAnnotation{
          base.instances[static_cast<std::size_t>(i)].id,
          taxonomy.at(object_verbs[static_cast<std::size_t>(i) %
                                   object_verbs.size()])
              .name,
          base.instances[static_cast<std::size_t>(config.persons + i)].id,
          std::nullopt});
    }
    rendered.push_back(RenderPerfectBundle(scene, grid, taxonomy,
                                           config.embedding_dim));
  }

  const std::size_t rows = rendered.size();
  std::vector<std::vector<double>> samples(rows);
  std::vector<std::size_t> triplets(rows, 0);
  std::vector<std::size_t> kept(rows, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    triplets[r] =
        Decode(rendered[r].bundle, rendered[r].detections, taxonomy,
               config.decode)
            .size();  // warm-up
    kept[r] = SelectDetections(rendered[r].detections, config.decode.nms).size();
  }
  for (int rep = 0; rep < config.repetitions; ++rep) {
    for (std::size_t r = 0; r < rows; ++r) {
      const auto start = std::chrono::steady_clock::now();
      const std::vector<PredictedTriplet> out = Decode(
          rendered[r].bundle, rendered[r].detections, taxonomy, config.decode);
      const auto stop = std::chrono::steady_clock::now();
      samples[r].push_back(
          std::chrono::duration<double, std::micro>(stop - start).count());
    }
  }

  DecodeBenchReport report;
  for (std::size_t r = 0; r < rows; ++r) {
    DecodeBenchRow row;
    row.interactions = config.interactions[r];
    row.detections = kept[r];
    row.triplets = triplets[r];
    row.median_us = Median(samples[r]);
    row.min_us = *std::min_element(samples[r].begin(), samples[r].end());
    row.mean_us = std::accumulate(samples[r].begin(), samples[r].end(), 0.0) /
                  static_cast<double>(samples[r].size());
    report.rows.push_back(row);
  }

  if (rows >= 2) {
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const DecodeBenchRow& row : report.rows) {
      mean_x += row.interactions;
      mean_y += row.median_us;
    }
    mean_x /= static_cast<double>(rows);
    mean_y /= static_cast<double>(rows);
    double sxy = 0.0;
    double sxx = 0.0;
    for (const DecodeBenchRow& row : report.rows) {
      sxy += (row.interactions - mean_x) * (row.median_us - mean_y);
      sxx += (row.interactions - mean_x) * (row.interactions - mean_x);
    }
    report.slope_us_per_interaction = sxx > 0.0 ? sxy / sxx : 0.0;
    auto [lo, hi] = std::minmax_element(
        report.rows.begin(), report.rows.end(),
        [](const DecodeBenchRow& a, const DecodeBenchRow& b) {
          return a.median_us < b.median_us;
        });
    report.max_ratio = lo->median_us > 0.0 ? hi->median_us / lo->median_us : 1.0;
  }
  return report;
}

std::string FormatBenchTable(const DecodeBenchReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%12s %10s %8s %12s %12s %12s\n",
                "interactions", "detections", "triplets", "median_us",
                "min_us", "mean_us");
  out += line;
  for (const DecodeBenchRow& row : report.rows) {
    std::snprintf(line, sizeof(line), "%12d %10zu %8zu %12.1f %12.1f %12.1f\n",
                  row.interactions, row.detections, row.triplets,
                  row.median_us, row.min_us, row.mean_us);
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "slope: %.3f us/interaction, max/min median: %.3f\n",
                report.slope_us_per_interaction, report.max_ratio);
  out += line;
  return out;
}

}  // namespace h2o
