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

// Deterministic synthetic scenes and the dense maps a perfect model would
// produce for them.
//
// Generated scenes satisfy every annotation rule and are built so that a
// perfect bundle decodes back to exactly the annotated triplets: each
// instance sits on its own anchor cell, every interaction component has a
// single acting subject, and within a component the members a verb accepts
// as targets are exactly the annotated targets of that verb.

#ifndef H2O_SYNTHGEN_H_
#define H2O_SYNTHGEN_H_

#include <cstdint>
#include <vector>

#include "h2o/anchors.h"
#include "h2o/bundle.h"
#include "h2o/geometry.h"
#include "h2o/taxonomy.h"
#include "h2o/types.h"

namespace h2o {

struct NoiseConfig {
  // Gaussian jitter on probability planes (clipped to [0, 1]).
  double sigma_probability = 0.0;
  // Gaussian jitter on embeddings.
  double sigma_embedding = 0.0;
  // Gaussian jitter on detection box coordinates, in pixels.
  double sigma_box = 0.0;
};

struct SynthConfig {
  int image_width = 256;
  int image_height = 256;
  int min_persons = 1;
  int max_persons = 4;
  int min_objects = 0;
  int max_objects = 4;
  // Probability that an object is outside the class registry ("other").
  double other_class_rate = 0.25;
  // Probability that a person with free candidate targets acts on them.
  double actor_rate = 0.7;
  // Free (non-exclusive) categories the generator may sample verbs from.
  std::vector<Category> categories = {Category::kObjectInteraction,
                                      Category::kSocial, Category::kViolent};
  int max_verbs_per_category = 2;
  int max_targets_per_verb = 2;
  // Probability of an extra target-less free verb per person.
  double untargeted_verb_rate = 0.3;
  // Upper bound on the IoU between any two placed instances.
  double max_pairwise_iou = 0.3;
  AnchorGridConfig grid;
  int embedding_dim = 16;
  double margin = 1.0;
  int max_placement_attempts = 2000;

  // Throws std::invalid_argument on empty ranges or negative rates.
  void Validate() const;
};

// Instance ids of a generated scene are image_id * kInstanceIdStride + k.
inline constexpr InstanceId kInstanceIdStride = 1000;

// Same (config, seed, image_id) -> same scene. Throws StructuralError when
// the instances cannot be placed within the attempt budget.
Scene GenerateScene(const SynthConfig& config, std::uint64_t seed,
                    ImageId image_id);

// Scenes for seeds first_seed .. first_seed + count - 1, with image ids
// equal to the seeds.
std::vector<Scene> GenerateDataset(const SynthConfig& config,
                                   std::uint64_t first_seed, int count);

// Anchor boxes lying fully inside the image, picked at random on distinct
// cells with pairwise IoU <= max_iou. Throws StructuralError when `count`
// boxes cannot be placed within `max_attempts` draws.
std::vector<AnchorRef> PlaceOnAnchors(const AnchorGrid& grid, int count,
                                      double max_iou, std::uint64_t seed,
                                      int max_attempts);

// The k-th embedding codeword: base-4 digits of k scaled by 2 * margin, so
// distinct codewords are at least 2 * margin apart.
std::vector<float> Codeword(std::int64_t k, int dim, double margin);

struct RenderedScene {
  DenseMapBundle bundle;
  // One per instance, in scene order, score 1, anchored at the instance's
  // best-overlapping positive anchor.
  std::vector<Detection> detections;
};

// Verb and presence planes are 1 where the anchor assignment has a positive
// label and 0 elsewhere. Each interaction component gets its own codeword on
// all of its members' anchors; every other instance gets a codeword of its
// own. Throws StructuralError when an instance has no positive anchor.
RenderedScene RenderPerfectBundle(const Scene& scene, const AnchorGrid& grid,
                                  const Taxonomy& taxonomy = BuiltinTaxonomy(),
                                  int embedding_dim = 16, double margin = 1.0);

// Adds clipped Gaussian jitter to the probability planes and Gaussian jitter
// to the embedding plane. Zero sigmas return an identical bundle.
DenseMapBundle Perturb(const DenseMapBundle& bundle, const NoiseConfig& noise,
                       std::uint64_t seed);

// Jitters box coordinates; sizes stay positive. Anchor refs are kept.
std::vector<Detection> PerturbDetections(std::vector<Detection> detections,
                                         double sigma_box, std::uint64_t seed);

}  // namespace h2o

#endif  // H2O_SYNTHGEN_H_
