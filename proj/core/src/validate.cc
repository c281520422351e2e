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

#include "h2o/validate.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "h2o/errors.h"

namespace h2o {

namespace {

std::string DescribeTarget(const std::optional<InstanceId>& target) {
  return target ? std::to_string(*target) : std::string("none");
}

std::string JoinVerbs(const std::set<std::string>& names) {
  std::string out;
  for (const std::string& name : names) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

std::string DescribeTargets(const std::set<std::optional<InstanceId>>& set) {
  std::string out = "{";
  bool first = true;
  for (const auto& target : set) {
    if (!first) out += ", ";
    out += DescribeTarget(target);
    first = false;
  }
  return out + "}";
}

// Verbs and targets of one exclusive category for one person.
struct ExclusiveSlot {
  std::set<std::string> verbs;
  std::set<std::optional<InstanceId>> targets;
};

}  // namespace

std::string RuleId(Rule rule) {
  return "R" + std::to_string(static_cast<int>(rule));
}

std::string FormatViolation(const Violation& violation) {
  std::ostringstream out;
  out << RuleId(violation.rule) << " subject " << violation.subject_id << ": "
      << violation.message;
  return out.str();
}

std::vector<Violation> ValidateScene(const Scene& scene,
                                     const Taxonomy& taxonomy) {
  std::unordered_map<InstanceId, const Instance*> instances;
  for (const Instance& instance : scene.instances) {
    if (!instances.emplace(instance.id, &instance).second) {
      throw StructuralError("image " + std::to_string(scene.image_id) +
                            ": duplicate instance id " +
                            std::to_string(instance.id));
    }
  }
  auto resolve = [&](InstanceId id, std::string_view role) -> const Instance& {
    auto it = instances.find(id);
    if (it == instances.end()) {
      throw StructuralError("image " + std::to_string(scene.image_id) + ": " +
                            std::string(role) + " id " + std::to_string(id) +
                            " does not resolve to an instance");
    }
    return *it->second;
  };

  std::vector<Violation> violations;
  auto emit = [&](Rule rule, InstanceId subject, std::string message) {
    violations.push_back(Violation{rule, subject, std::move(message)});
  };

  std::map<InstanceId, ExclusiveSlot> posture;
  std::map<InstanceId, ExclusiveSlot> motion;
  using TripletKey = std::tuple<InstanceId, std::string,
                                std::optional<InstanceId>,
                                std::optional<InstanceId>>;
  std::map<TripletKey, int> seen;

  for (const InteractionAnnotation& ann : scene.interactions) {
    const Verb& verb = taxonomy.Get(ann.verb);
    const Instance& subject = resolve(ann.subject_id, "subject");
    const Instance* target =
        ann.target_id ? &resolve(*ann.target_id, "target") : nullptr;
    const Instance* instrument =
        ann.instrument_id ? &resolve(*ann.instrument_id, "instrument")
                          : nullptr;

    if (!subject.is_person()) {
      emit(Rule::kPersonSubject, subject.id,
           "subject of '" + verb.name + "' is a '" + subject.class_name +
               "', not a person");
    }

    if (target != nullptr) {
      if (target->id == subject.id) {
        emit(Rule::kTargetKind, subject.id,
             "'" + verb.name + "' targets its own subject");
      } else if (!verb.target_rule.Accepts(target->is_person())) {
        emit(Rule::kTargetKind, subject.id,
             "'" + verb.name + "' does not accept a " +
                 (target->is_person() ? "person" : "object") + " target (" +
                 std::string(TargetKindName(verb.target_rule.kind)) +
                 "), got instance " + std::to_string(target->id));
      }
    }

    if (instrument != nullptr) {
      if (!verb.target_rule.instrument_allowed) {
        emit(Rule::kInstrumentAllowed, subject.id,
             "'" + verb.name + "' does not take an instrument, got instance " +
                 std::to_string(instrument->id));
      }
      if (instrument->is_person() || instrument->id == subject.id ||
          (target != nullptr && instrument->id == target->id)) {
        emit(Rule::kTargetKind, subject.id,
             "instrument of '" + verb.name + "' must be a distinct object, got"
             " instance " + std::to_string(instrument->id));
      }
    }

    if (verb.category == Category::kPosture ||
        verb.category == Category::kMotion) {
      ExclusiveSlot& slot = verb.category == Category::kPosture
                                ? posture[subject.id]
                                : motion[subject.id];
      slot.verbs.insert(verb.name);
      slot.targets.insert(ann.target_id);
    }

    const int count = ++seen[TripletKey{ann.subject_id, ann.verb, ann.target_id,
                                        ann.instrument_id}];
    if (count == 2) {
      emit(Rule::kDuplicateTriplet, subject.id,
           "duplicate triplet <" + std::to_string(subject.id) + ", " +
               verb.name + ", " + DescribeTarget(ann.target_id) + ">");
    }
  }

  for (const Instance& instance : scene.instances) {
    if (!instance.is_person()) continue;
    const ExclusiveSlot empty;
    auto p = posture.find(instance.id);
    auto m = motion.find(instance.id);
    const ExclusiveSlot& p_slot = p == posture.end() ? empty : p->second;
    const ExclusiveSlot& m_slot = m == motion.end() ? empty : m->second;

    bool exclusive_ok = true;
    for (const auto& [category, slot] :
         {std::pair{Category::kPosture, &p_slot},
          std::pair{Category::kMotion, &m_slot}}) {
      if (slot->verbs.size() == 1) continue;
      exclusive_ok = false;
      std::string message = "expected exactly one " +
                            std::string(CategoryName(category)) +
                            " verb, found " +
                            std::to_string(slot->verbs.size());
      if (!slot->verbs.empty()) message += " (" + JoinVerbs(slot->verbs) + ")";
      emit(Rule::kExclusiveMandatory, instance.id, std::move(message));
    }
    if (exclusive_ok && p_slot.targets != m_slot.targets) {
      emit(Rule::kSharedPostureMotionTarget, instance.id,
           "Posture targets " + DescribeTargets(p_slot.targets) +
               " differ from Motion targets " +
               DescribeTargets(m_slot.targets));
    }
  }

  std::sort(violations.begin(), violations.end(),
            [](const Violation& a, const Violation& b) {
              return std::tie(a.subject_id, a.rule, a.message) <
                     std::tie(b.subject_id, b.rule, b.message);
            });
  return violations;
}

}  // namespace h2o
