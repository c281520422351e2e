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
// Scene -> perfect bundle -> decoded triplets, compared as multisets.

#ifndef H2O_TESTS_COMMON_ROUNDTRIP_H_
#define H2O_TESTS_COMMON_ROUNDTRIP_H_

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "h2o/decoder.h"
#include "h2o/synthgen.h"

namespace h2o::testing {

// (subject box, verb, target box) with boxes as coordinate tuples.
using BoxKey = std::tuple<double, double, double, double>;
using TripletKey = std::tuple<BoxKey, std::string, std::optional<BoxKey>>;

inline BoxKey KeyOf(const BBox& box) { return {box.x, box.y, box.w, box.h}; }

inline std::vector<TripletKey> GroundTruthTriplets(const Scene& scene) {
  std::vector<TripletKey> out;
  for (const InteractionAnnotation& ann : scene.interactions) {
    std::optional<BoxKey> target;
    if (ann.target_id) target = KeyOf(scene.FindInstance(*ann.target_id)->bbox);
    out.emplace_back(KeyOf(scene.FindInstance(ann.subject_id)->bbox), ann.verb,
                     target);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<TripletKey> DecodedTriplets(
    const std::vector<PredictedTriplet>& preds) {
  std::vector<TripletKey> out;
  for (const PredictedTriplet& p : preds) {
    std::optional<BoxKey> target;
    if (p.target_box) target = KeyOf(*p.target_box);
    out.emplace_back(KeyOf(p.subject_box), p.verb, target);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Every partner triplet of a perfect bundle scores 1; the best non-partner
// affinity is 1/3, so 0.5 separates the two.
inline DecodeConfig RoundTripDecodeConfig() {
  DecodeConfig config;
  config.triplet_floor = 0.5;
  return config;
}

struct RoundTrip {
  RenderedScene rendered;
  std::vector<PredictedTriplet> decoded;
};

inline RoundTrip RunRoundTrip(const Scene& scene, const SynthConfig& config,
                              const NoiseConfig& noise = {},
                              std::uint64_t noise_seed = 0,
                              const DecodeConfig& decode =
                                  RoundTripDecodeConfig()) {
  const AnchorGrid grid =
      BuildAnchorGrid(scene.width, scene.height, config.grid);
  RoundTrip out{RenderPerfectBundle(scene, grid, BuiltinTaxonomy(),
                                    config.embedding_dim, config.margin),
                {}};
  const DenseMapBundle bundle =
      Perturb(out.rendered.bundle, noise, noise_seed);
  out.decoded = Decode(bundle, out.rendered.detections, BuiltinTaxonomy(),
                       decode);
  return out;
}

}  // namespace h2o::testing

#endif  // H2O_TESTS_COMMON_ROUNDTRIP_H_
