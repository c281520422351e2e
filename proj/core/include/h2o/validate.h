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

#ifndef H2O_VALIDATE_H_
#define H2O_VALIDATE_H_

#include <string>
#include <string_view>
#include <vector>

#include "h2o/taxonomy.h"
#include "h2o/types.h"

namespace h2o {

// Annotation rules checked by ValidateScene().
enum class Rule {
  // Every person has exactly one Posture verb and exactly one Motion verb.
  kExclusiveMandatory = 1,
  // Posture and Motion of a person reference the same target, or none.
  kSharedPostureMotionTarget = 2,
  // Target (and instrument) instance kind is legal for the verb.
  kTargetKind = 3,
  // Instrument only on instrument-capable verbs.
  kInstrumentAllowed = 4,
  // Only persons are interaction subjects.
  kPersonSubject = 5,
  // No duplicated triplet.
  kDuplicateTriplet = 6,
};

// "R1" .. "R6".
std::string RuleId(Rule rule);

struct Violation {
  Rule rule;
  InstanceId subject_id = 0;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Checks `scene` against the taxonomy rules. The result is sorted by
// (subject id, rule, message), so it does not depend on the order of
// instances or annotations. Throws StructuralError when an annotation
// references an unknown instance id or verb.
std::vector<Violation> ValidateScene(const Scene& scene,
                                     const Taxonomy& taxonomy);

std::string FormatViolation(const Violation& violation);

}  // namespace h2o

#endif  // H2O_VALIDATE_H_
