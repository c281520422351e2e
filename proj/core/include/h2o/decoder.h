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

// Single-pass, subject-centric interaction decoding.
//
// Every kept detection points at one anchor of the dense maps. For a person
// s and verb v, the verb probability sigma_v, target presence sigma_pres and
// embedding e_s are read at the person's own anchor, and
//
//   score(s, v, t) = sigma_v * sigma_pres * aff(e_s, e_t)
//   score(s, v, 0) = sigma_v * (1 - sigma_pres)        (no target)
//   aff(e_s, e_t)  = 1 / (1 + |e_s - e_t| / bandwidth)
//
// for every detection t that the verb accepts as a target. Posture and
// Motion are exclusive: only the category argmax of sigma_v is scored, and
// only its single best target (or none) is emitted. The work done is
// O(K^2 * V) for K kept detections, independent of the map content.

#ifndef H2O_DECODER_H_
#define H2O_DECODER_H_

#include <span>
#include <vector>

#include "h2o/bundle.h"
#include "h2o/geometry.h"
#include "h2o/taxonomy.h"
#include "h2o/types.h"

namespace h2o {

struct DecodeConfig {
  // Triplets scoring below the floor are dropped.
  double triplet_floor = 0.05;
  // Maximum triplets kept per verb category and image.
  int per_category_topk = 100;
  double affinity_bandwidth = 1.0;
  NmsConfig nms;
};

double Affinity(std::span<const float> a, std::span<const float> b,
                double bandwidth = 1.0);

constexpr double TargetScore(double sigma_verb, double sigma_presence,
                             double affinity) {
  return sigma_verb * sigma_presence * affinity;
}

constexpr double EmptyTargetScore(double sigma_verb, double sigma_presence) {
  return sigma_verb * (1.0 - sigma_presence);
}

// Decodes the triplets of one image. Detections go through
// SelectDetections(cfg.nms) first; every kept detection must carry an
// anchor_ref inside the bundle's grid. Output is sorted by descending score
// and stamped with bundle.image_id(). Throws StructuralError on a missing or
// out-of-grid anchor_ref or when the bundle does not match the taxonomy.
std::vector<PredictedTriplet> Decode(const DenseMapBundle& bundle,
                                     const std::vector<Detection>& detections,
                                     const Taxonomy& taxonomy,
                                     const DecodeConfig& config = {});

}  // namespace h2o

#endif  // H2O_DECODER_H_
