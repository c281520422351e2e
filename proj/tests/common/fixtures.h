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

// Hand-built scenes and reference implementations shared by the unit tests
// and the acceptance runner.

#ifndef H2O_TESTS_COMMON_FIXTURES_H_
#define H2O_TESTS_COMMON_FIXTURES_H_

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "h2o/geometry.h"
#include "h2o/types.h"
#include "h2o/validate.h"

namespace h2o::testing {

class SceneMaker {
 public:
  explicit SceneMaker(ImageId image_id = 1) {
    scene_.image_id = image_id;
    scene_.file_name = "fixture.jpg";
    scene_.width = 640;
    scene_.height = 480;
  }

  // Boxes are laid out on a row so that instances never overlap.
  InstanceId Add(const std::string& class_name) {
    Instance instance;
    instance.id = static_cast<InstanceId>(scene_.instances.size()) + 1;
    instance.image_id = scene_.image_id;
    instance.bbox = BBox{10.0 + 60.0 * static_cast<double>(instance.id - 1),
                         10.0, 50.0, 100.0};
    instance.class_name = class_name;
    scene_.instances.push_back(instance);
    return instance.id;
  }
  InstanceId Person() { return Add("person"); }

  SceneMaker& Act(InstanceId subject, const std::string& verb,
                  std::optional<InstanceId> target = std::nullopt,
                  std::optional<InstanceId> instrument = std::nullopt) {
    scene_.interactions.push_back(
        InteractionAnnotation{subject, verb, target, instrument});
    return *this;
  }

  // stand + still, both on `target` when given.
  SceneMaker& Base(InstanceId person,
                   std::optional<InstanceId> target = std::nullopt) {
    return Act(person, "stand", target).Act(person, "still", target);
  }

  const Scene& scene() const { return scene_; }

 private:
  Scene scene_;
};

struct ValidatorCase {
  std::string name;
  Scene scene;
  std::vector<std::pair<Rule, InstanceId>> expected;
};

// Cases 0..19 each break exactly one rule once; the last two are legal.
inline std::vector<ValidatorCase> ValidatorCases() {
  std::vector<ValidatorCase> cases;
  auto add = [&](std::string name, const SceneMaker& maker,
                 std::vector<std::pair<Rule, InstanceId>> expected) {
    cases.push_back({std::move(name), maker.scene(), std::move(expected)});
  };
  using R = Rule;

  {  // R1
    SceneMaker m;
    const InstanceId p = m.Person();
    m.Act(p, "still");
    add("r1_missing_posture", m, {{R::kExclusiveMandatory, p}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    m.Act(p, "sit");
    add("r1_missing_motion", m, {{R::kExclusiveMandatory, p}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    m.Act(p, "stand").Act(p, "sit").Act(p, "still");
    add("r1_two_postures", m, {{R::kExclusiveMandatory, p}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    m.Act(p, "stand").Act(p, "walk").Act(p, "run");
    add("r1_two_motions", m, {{R::kExclusiveMandatory, p}});
  }
  {
    SceneMaker m;
    const InstanceId a = m.Person();
    const InstanceId b = m.Person();
    m.Base(a).Act(b, "crouch");
    add("r1_second_person_without_motion", m, {{R::kExclusiveMandatory, b}});
  }
  {  // R2
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId stool_a = m.Add("chair");
    const InstanceId stool_b = m.Add("chair");
    m.Act(p, "stand", stool_a).Act(p, "still", stool_b);
    add("r2_different_targets", m, {{R::kSharedPostureMotionTarget, p}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId stool = m.Add("chair");
    m.Act(p, "stand", stool).Act(p, "still");
    add("r2_posture_target_only", m, {{R::kSharedPostureMotionTarget, p}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId board = m.Add("skateboard");
    m.Act(p, "crouch").Act(p, "board", board);
    add("r2_motion_target_only", m, {{R::kSharedPostureMotionTarget, p}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId q = m.Person();
    const InstanceId bench = m.Add("bench");
    m.Act(p, "sit", bench).Act(p, "still", q).Base(q);
    add("r2_object_and_person_targets", m,
        {{R::kSharedPostureMotionTarget, p}});
  }
  {  // R3
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId cup = m.Add("cup");
    m.Base(p).Act(p, "hug", cup);
    add("r3_social_on_object", m, {{R::kTargetKind, p}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId q = m.Person();
    m.Base(p).Base(q).Act(p, "hold", q);
    add("r3_object_verb_on_person", m, {{R::kTargetKind, p}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    m.Base(p).Act(p, "punch", p);
    add("r3_self_target", m, {{R::kTargetKind, p}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId q = m.Person();
    const InstanceId cake = m.Add("cake");
    m.Base(p).Base(q).Act(p, "eat", cake, q);
    add("r3_person_instrument", m, {{R::kTargetKind, p}});
  }
  {  // R4
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId cup = m.Add("cup");
    const InstanceId spoon = m.Add("spoon");
    m.Base(p).Act(p, "hold", cup, spoon);
    add("r4_hold_with_instrument", m, {{R::kInstrumentAllowed, p}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId q = m.Person();
    const InstanceId flower = m.Add("potted plant");
    m.Base(p).Base(q).Act(p, "hug", q, flower);
    add("r4_social_with_instrument", m, {{R::kInstrumentAllowed, p}});
  }
  {  // R5
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId cup = m.Add("cup");
    const InstanceId ball = m.Add("sports ball");
    m.Base(p).Act(cup, "hold", ball);
    add("r5_object_subject", m, {{R::kPersonSubject, cup}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId dog = m.Add("dog");
    m.Base(p).Act(dog, "walk");
    add("r5_animal_subject", m, {{R::kPersonSubject, dog}});
  }
  {  // R6
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId cup = m.Add("cup");
    m.Base(p).Act(p, "hold", cup).Act(p, "hold", cup);
    add("r6_duplicate_targeted", m, {{R::kDuplicateTriplet, p}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    m.Base(p).Act(p, "wave").Act(p, "wave");
    add("r6_duplicate_untargeted", m, {{R::kDuplicateTriplet, p}});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId pizza = m.Add("pizza");
    const InstanceId fork = m.Add("fork");
    m.Base(p).Act(p, "eat", pizza, fork).Act(p, "eat", pizza, fork);
    add("r6_duplicate_with_instrument", m, {{R::kDuplicateTriplet, p}});
  }

  {  // legal
    SceneMaker m;
    const InstanceId p = m.Person();
    m.Base(p);
    add("ok_stand_still", m, {});
  }
  {
    SceneMaker m;
    const InstanceId p = m.Person();
    const InstanceId q = m.Person();
    const InstanceId stool = m.Add("chair");
    const InstanceId cup1 = m.Add("cup");
    const InstanceId cup2 = m.Add("cup");
    const InstanceId pizza = m.Add("pizza");
    const InstanceId fork = m.Add("fork");
    const InstanceId other = m.Add("other");
    m.Base(p, stool)
        .Act(p, "hold", cup1)
        .Act(p, "hold", cup2)
        .Act(p, "eat", pizza, fork)
        .Act(p, "hug", q)
        .Act(p, "kick", other)
        .Act(p, "wave")
        .Act(q, "sit")
        .Act(q, "undetermined motion")
        .Act(q, "punch", p);
    add("ok_all_rules", m, {});
  }
  return cases;
}

// Straightforward greedy NMS: repeatedly keep the best remaining detection
// (score, then class name, then input position) and discard every remaining
// detection of the same class overlapping it by more than the threshold.
inline std::vector<std::size_t> ReferenceNms(
    const std::vector<Detection>& dets, double iou_threshold) {
  auto iou = [](const BBox& a, const BBox& b) {
    const double iw =
        std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    const double ih =
        std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    const double inter = iw * ih;
    const double uni = a.w * a.h + b.w * b.h - inter;
    return uni > 0.0 ? inter / uni : 0.0;
  };
  std::vector<bool> alive(dets.size(), true);
  std::vector<std::size_t> kept;
  while (true) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (!alive[i]) continue;
      if (!best) {
        best = i;
        continue;
      }
      const Detection& a = dets[i];
      const Detection& b = dets[*best];
      if (a.score > b.score ||
          (a.score == b.score && a.class_name < b.class_name)) {
        best = i;
      }
    }
    if (!best) break;
    kept.push_back(*best);
    alive[*best] = false;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (alive[i] && dets[i].class_name == dets[*best].class_name &&
          iou(dets[i].bbox, dets[*best].bbox) > iou_threshold) {
        alive[i] = false;
      }
    }
  }
  return kept;
}

}  // namespace h2o::testing

#endif  // H2O_TESTS_COMMON_FIXTURES_H_
