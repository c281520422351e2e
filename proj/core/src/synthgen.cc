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

#include "h2o/synthgen.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

#include "h2o/assignment.h"
#include "h2o/errors.h"
#include "h2o/validate.h"

namespace h2o {

namespace {

using Rng = std::mt19937_64;

int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool Bernoulli(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

template <typename T>
const T& Pick(Rng& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(
      UniformInt(rng, 0, static_cast<int>(items.size()) - 1))];
}

// `count` distinct elements of `items`, in random order.
template <typename T>
std::vector<T> Sample(Rng& rng, std::vector<T> items, int count) {
  std::shuffle(items.begin(), items.end(), rng);
  items.resize(static_cast<std::size_t>(count));
  return items;
}

const std::vector<std::string>& ObjectClasses() {
  static const std::vector<std::string>* const kClasses = [] {
    auto* classes = new std::vector<std::string>;
    for (const std::string& name : ClassRegistry::Coco().names()) {
      if (name != kPersonClass) classes->push_back(name);
    }
    return classes;
  }();
  return *kClasses;
}

bool Enabled(const SynthConfig& config, Category category) {
  return std::find(config.categories.begin(), config.categories.end(),
                   category) != config.categories.end();
}

// How an acting person uses its free candidates.
enum class ActorMode {
  kPostureTarget,  // Posture and Motion share one target.
  kObjects,        // object verbs, all on the same objects
  kSocial,         // social verbs, all on the same persons
  kViolent,        // violent verbs, all on the same instances
  kMixed,          // social verbs on persons and object verbs on objects
};

class SceneBuilder {
 public:
  SceneBuilder(const SynthConfig& config, Rng& rng, Scene& scene)
      : config_(config), rng_(rng), scene_(scene) {}

  void Build() {
    std::vector<std::size_t> persons;
    for (std::size_t i = 0; i < scene_.instances.size(); ++i) {
      if (scene_.instances[i].is_person()) persons.push_back(i);
    }
    std::vector<std::size_t> order = persons;
    std::shuffle(order.begin(), order.end(), rng_);

    for (std::size_t p : order) {
      if (used_.count(p) != 0) continue;
      used_.insert(p);
      const std::vector<ActorMode> modes = FeasibleModes();
      if (modes.empty() || !Bernoulli(rng_, config_.actor_rate)) continue;
      Act(p, Pick(rng_, modes));
    }

    for (std::size_t p : persons) {
      auto target = shared_target_.find(p);
      const std::optional<InstanceId> shared =
          target == shared_target_.end()
              ? std::nullopt
              : std::optional<InstanceId>(scene_.instances[target->second].id);
      Add(p, Pick(rng_, BuiltinTaxonomy().VerbsIn(Category::kPosture)), shared);
      Add(p, Pick(rng_, BuiltinTaxonomy().VerbsIn(Category::kMotion)), shared);
      if (!config_.categories.empty() &&
          Bernoulli(rng_, config_.untargeted_verb_rate)) {
        std::vector<int> options;
        for (Category category : config_.categories) {
          for (int verb : BuiltinTaxonomy().VerbsIn(category)) {
            if (verbs_of_[p].count(verb) == 0) options.push_back(verb);
          }
        }
        if (!options.empty()) Add(p, Pick(rng_, options), std::nullopt);
      }
    }

    std::stable_sort(scene_.interactions.begin(), scene_.interactions.end(),
                     [](const InteractionAnnotation& a,
                        const InteractionAnnotation& b) {
                       return a.subject_id < b.subject_id;
                     });
  }

 private:
  std::vector<std::size_t> Free(bool want_person) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < scene_.instances.size(); ++i) {
      if (used_.count(i) == 0 && scene_.instances[i].is_person() == want_person) {
        out.push_back(i);
      }
    }
    return out;
  }

  std::vector<ActorMode> FeasibleModes() const {
    const bool objects = !Free(false).empty();
    const bool persons = !Free(true).empty();
    std::vector<ActorMode> modes;
    if (objects || persons) modes.push_back(ActorMode::kPostureTarget);
    if (objects && Enabled(config_, Category::kObjectInteraction)) {
      modes.push_back(ActorMode::kObjects);
    }
    if (persons && Enabled(config_, Category::kSocial)) {
      modes.push_back(ActorMode::kSocial);
    }
    if ((objects || persons) && Enabled(config_, Category::kViolent)) {
      modes.push_back(ActorMode::kViolent);
    }
    if (objects && persons && Enabled(config_, Category::kObjectInteraction) &&
        Enabled(config_, Category::kSocial)) {
      modes.push_back(ActorMode::kMixed);
    }
    return modes;
  }

  std::vector<std::size_t> TakeTargets(std::vector<std::size_t> pool) {
    const int k = UniformInt(
        rng_, 1,
        std::min(config_.max_targets_per_verb, static_cast<int>(pool.size())));
    std::vector<std::size_t> targets = Sample(rng_, std::move(pool), k);
    std::sort(targets.begin(), targets.end());
    for (std::size_t t : targets) used_.insert(t);
    return targets;
  }

  // Verbs of `category` applied to every target.
  void ActOn(std::size_t actor, Category category,
             const std::vector<std::size_t>& targets) {
    const std::vector<int>& pool = BuiltinTaxonomy().VerbsIn(category);
    const int m = UniformInt(
        rng_, 1,
        std::min(config_.max_verbs_per_category, static_cast<int>(pool.size())));
    std::vector<int> verbs = Sample(rng_, pool, m);
    std::sort(verbs.begin(), verbs.end());
    for (int verb : verbs) {
      for (std::size_t t : targets) {
        Add(actor, verb, scene_.instances[t].id);
      }
    }
  }

  void Act(std::size_t actor, ActorMode mode) {
    switch (mode) {
      case ActorMode::kPostureTarget: {
        std::vector<std::size_t> pool = Free(false);
        const std::vector<std::size_t> persons = Free(true);
        pool.insert(pool.end(), persons.begin(), persons.end());
        const std::size_t target = Pick(rng_, pool);
        used_.insert(target);
        shared_target_[actor] = target;
        break;
      }
      case ActorMode::kObjects:
        ActOn(actor, Category::kObjectInteraction, TakeTargets(Free(false)));
        break;
      case ActorMode::kSocial:
        ActOn(actor, Category::kSocial, TakeTargets(Free(true)));
        break;
      case ActorMode::kViolent: {
        std::vector<std::size_t> pool = Free(false);
        const std::vector<std::size_t> persons = Free(true);
        pool.insert(pool.end(), persons.begin(), persons.end());
        ActOn(actor, Category::kViolent, TakeTargets(std::move(pool)));
        break;
      }
      case ActorMode::kMixed: {
        const std::vector<std::size_t> persons = TakeTargets(Free(true));
        const std::vector<std::size_t> objects = TakeTargets(Free(false));
        ActOn(actor, Category::kSocial, persons);
        ActOn(actor, Category::kObjectInteraction, objects);
        break;
      }
    }
  }

  void Add(std::size_t subject, int verb, std::optional<InstanceId> target) {
    verbs_of_[subject].insert(verb);
    scene_.interactions.push_back(InteractionAnnotation{
        scene_.instances[subject].id, BuiltinTaxonomy().at(verb).name, target,
        std::nullopt});
  }

  const SynthConfig& config_;
  Rng& rng_;
  Scene& scene_;
  std::set<std::size_t> used_;    // actors and targets
  std::map<std::size_t, std::size_t> shared_target_;
  std::map<std::size_t, std::set<int>> verbs_of_;
};

}  // namespace

void SynthConfig::Validate() const {
  if (image_width <= 0 || image_height <= 0) {
    throw std::invalid_argument("synth: image size must be positive");
  }
  if (min_persons < 0 || min_persons > max_persons || min_objects < 0 ||
      min_objects > max_objects) {
    throw std::invalid_argument("synth: empty person or object range");
  }
  if (max_persons + max_objects >= kInstanceIdStride) {
    throw std::invalid_argument("synth: too many instances per scene");
  }
  if (other_class_rate < 0.0 || actor_rate < 0.0 ||
      untargeted_verb_rate < 0.0 || max_pairwise_iou < 0.0) {
    throw std::invalid_argument("synth: rates must be non-negative");
  }
  if (max_verbs_per_category < 1 || max_targets_per_verb < 1) {
    throw std::invalid_argument("synth: verb and target caps must be >= 1");
  }
  if (embedding_dim < 1 || margin <= 0.0) {
    throw std::invalid_argument("synth: embedding size and margin must be > 0");
  }
  for (Category category : categories) {
    if (IsExclusive(category)) {
      throw std::invalid_argument(
          "synth: Posture and Motion are always sampled; list only free "
          "categories");
    }
  }
}

std::vector<AnchorRef> PlaceOnAnchors(const AnchorGrid& grid, int count,
                                      double max_iou, std::uint64_t seed,
                                      int max_attempts) {
  std::vector<std::int64_t> inside;
  for (std::size_t a = 0; a < grid.boxes.size(); ++a) {
    const BBox& box = grid.boxes[a];
    if (box.x >= 0.0 && box.y >= 0.0 && box.right() <= grid.image_width &&
        box.bottom() <= grid.image_height) {
      inside.push_back(static_cast<std::int64_t>(a));
    }
  }
  if (count > 0 && inside.empty()) {
    throw StructuralError("synth: no anchor fits inside the image");
  }
  Rng rng(seed);
  std::vector<AnchorRef> placed;
  std::vector<std::int64_t> placed_flat;
  std::set<std::tuple<int, int, int>> cells;
  int attempts = 0;
  while (static_cast<int>(placed.size()) < count) {
    if (attempts++ >= max_attempts) {
      throw StructuralError("synth: could not place " + std::to_string(count) +
                            " instances within " +
                            std::to_string(max_attempts) + " attempts");
    }
    const std::int64_t flat = Pick(rng, inside);
    const AnchorRef ref = grid.shape.RefOf(flat);
    if (cells.count({ref.level, ref.y, ref.x}) != 0) continue;
    const BBox& box = grid.boxes[static_cast<std::size_t>(flat)];
    const bool overlaps = std::any_of(
        placed_flat.begin(), placed_flat.end(), [&](std::int64_t other) {
          return Iou(grid.boxes[static_cast<std::size_t>(other)], box) > max_iou;
        });
    if (overlaps) continue;
    cells.insert({ref.level, ref.y, ref.x});
    placed.push_back(ref);
    placed_flat.push_back(flat);
  }
  return placed;
}

Scene GenerateScene(const SynthConfig& config, std::uint64_t seed,
                    ImageId image_id) {
  config.Validate();
  Rng rng(seed);
  Scene scene;
  scene.image_id = image_id;
  scene.file_name = "synth_" + std::to_string(image_id) + ".jpg";
  scene.width = config.image_width;
  scene.height = config.image_height;

  const int n_persons = UniformInt(rng, config.min_persons, config.max_persons);
  const int n_objects = UniformInt(rng, config.min_objects, config.max_objects);
  const AnchorGrid grid =
      BuildAnchorGrid(config.image_width, config.image_height, config.grid);
  const std::vector<AnchorRef> refs =
      PlaceOnAnchors(grid, n_persons + n_objects, config.max_pairwise_iou,
                     rng(), config.max_placement_attempts);

  for (int k = 0; k < n_persons + n_objects; ++k) {
    Instance instance;
    instance.id = image_id * kInstanceIdStride + k + 1;
    instance.image_id = image_id;
    instance.bbox = grid.boxes[static_cast<std::size_t>(
        grid.shape.FlatIndex(refs[static_cast<std::size_t>(k)]))];
    if (k < n_persons) {
      instance.class_name = std::string(kPersonClass);
    } else if (Bernoulli(rng, config.other_class_rate)) {
      instance.class_name = std::string(kOtherClass);
    } else {
      instance.class_name = Pick(rng, ObjectClasses());
    }
    scene.instances.push_back(std::move(instance));
  }

  SceneBuilder(config, rng, scene).Build();

  const std::vector<Violation> violations =
      ValidateScene(scene, BuiltinTaxonomy());
  if (!violations.empty()) {
    throw std::logic_error("synth produced an invalid scene: " +
                           FormatViolation(violations.front()));
  }
  return scene;
}

std::vector<Scene> GenerateDataset(const SynthConfig& config,
                                   std::uint64_t first_seed, int count) {
  std::vector<Scene> scenes;
  scenes.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(i);
    scenes.push_back(GenerateScene(config, seed, static_cast<ImageId>(seed)));
  }
  return scenes;
}

std::vector<float> Codeword(std::int64_t k, int dim, double margin) {
  std::vector<float> code(static_cast<std::size_t>(dim), 0.0f);
  for (int d = 0; d < dim && k > 0; ++d, k /= 4) {
    code[static_cast<std::size_t>(d)] =
        static_cast<float>(2.0 * margin * static_cast<double>(k % 4));
  }
  if (k > 0) throw StructuralError("synth: codeword index exceeds capacity");
  return code;
}

RenderedScene RenderPerfectBundle(const Scene& scene, const AnchorGrid& grid,
                                  const Taxonomy& taxonomy, int embedding_dim,
                                  double margin) {
  const Assignment assignment = AssignAnchors(grid, scene, taxonomy);
  if (!assignment.uncovered.empty()) {
    throw StructuralError("render: instance " +
                          std::to_string(assignment.uncovered.front()) +
                          " has no positive anchor");
  }
  RenderedScene out{DenseMapBundle(grid.shape, static_cast<int>(taxonomy.size()),
                                   embedding_dim),
                    {}};
  DenseMapBundle& bundle = out.bundle;
  bundle.set_image_id(scene.image_id);

  for (const AnchorLabels& labels : assignment.verb_labels) {
    std::span<float> verbs = bundle.VerbAt(labels.anchor);
    for (int channel : labels.positive_channels) {
      verbs[static_cast<std::size_t>(channel)] = 1.0f;
    }
  }
  for (const PresenceLabels& labels : assignment.presence_labels) {
    std::span<float> presence = bundle.PresenceAt(labels.anchor);
    for (std::size_t v = 0; v < labels.labels.size(); ++v) {
      presence[v] = labels.labels[v] != 0 ? 1.0f : 0.0f;
    }
  }

  // Codeword 0 is the all-zero background, so numbering starts at 1.
  std::vector<std::int64_t> codeword_of(scene.instances.size(), -1);
  std::int64_t next_codeword = 1;
  for (const std::vector<std::size_t>& members :
       InteractionComponents(scene)) {
    for (std::size_t i : members) codeword_of[i] = next_codeword;
    ++next_codeword;
  }
  for (std::int64_t& code : codeword_of) {
    if (code < 0) code = next_codeword++;
  }

  for (std::size_t i = 0; i < scene.instances.size(); ++i) {
    const Instance& instance = scene.instances[i];
    const std::vector<float> code =
        Codeword(codeword_of[i], embedding_dim, margin);
    std::int64_t best_anchor = -1;
    double best_iou = -1.0;
    for (std::int64_t anchor : assignment.positives[i]) {
      std::span<float> embedding = bundle.EmbeddingAt(anchor);
      std::copy(code.begin(), code.end(), embedding.begin());
      const double iou =
          Iou(grid.boxes[static_cast<std::size_t>(anchor)], instance.bbox);
      if (iou > best_iou) {
        best_iou = iou;
        best_anchor = anchor;
      }
    }
    Detection det;
    det.bbox = instance.bbox;
    det.class_name = instance.class_name;
    det.score = 1.0;
    det.anchor_ref = grid.shape.RefOf(best_anchor);
    det.image_id = scene.image_id;
    out.detections.push_back(std::move(det));
  }
  return out;
}

DenseMapBundle Perturb(const DenseMapBundle& bundle, const NoiseConfig& noise,
                       std::uint64_t seed) {
  if (noise.sigma_probability < 0.0 || noise.sigma_embedding < 0.0) {
    throw std::invalid_argument("perturb: sigma must be non-negative");
  }
  DenseMapBundle out = bundle;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  if (noise.sigma_probability > 0.0) {
    for (std::span<float> plane : {out.verb(), out.presence()}) {
      for (float& value : plane) {
        const double jittered = value + noise.sigma_probability * normal(rng);
        value = static_cast<float>(std::clamp(jittered, 0.0, 1.0));
      }
    }
  }
  if (noise.sigma_embedding > 0.0) {
    for (float& value : out.embedding()) {
      value = static_cast<float>(value + noise.sigma_embedding * normal(rng));
    }
  }
  return out;
}

std::vector<Detection> PerturbDetections(std::vector<Detection> detections,
                                         double sigma_box, std::uint64_t seed) {
  if (sigma_box < 0.0) {
    throw std::invalid_argument("perturb: sigma must be non-negative");
  }
  if (sigma_box == 0.0) return detections;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, sigma_box);
  for (Detection& det : detections) {
    det.bbox.x += normal(rng);
    det.bbox.y += normal(rng);
    det.bbox.w = std::max(1.0, det.bbox.w + normal(rng));
    det.bbox.h = std::max(1.0, det.bbox.h + normal(rng));
  }
  return detections;
}

}  // namespace h2o
