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

// AP_agent and AP_role.
//
// AP_agent scores the subject box only: one ground-truth item per distinct
// (image, subject, verb). AP_role scores the whole triplet: every annotation
// (subject, verb, target) is its own item, so a verb with several targets
// yields several items and each prediction consumes at most one of them.
//
// Original mode treats targets outside the class registry as "no target" on
// both sides; Objectness mode keeps them as boxes that must be localized.
// Role1 matches a ground-truth "no target" only with a "no target"
// prediction; Role2 ignores the predicted target in that case.

#ifndef H2O_EVALUATOR_H_
#define H2O_EVALUATOR_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "h2o/taxonomy.h"
#include "h2o/types.h"

namespace h2o {

enum class EvalMode { kOriginal, kObjectness };
enum class RoleVariant { kRole1, kRole2 };

std::string_view EvalModeName(EvalMode mode);
std::string_view RoleVariantName(RoleVariant role);
// Accepts "original" / "objectness" and "1" / "2"; throws
// std::invalid_argument otherwise.
EvalMode ParseEvalMode(std::string_view text);
RoleVariant ParseRoleVariant(std::string_view text);

struct EvalScenario {
  EvalMode mode = EvalMode::kOriginal;
  RoleVariant role = RoleVariant::kRole1;
  double iou_threshold = 0.5;

  // Throws std::invalid_argument unless the threshold is in (0, 1).
  void Validate() const;
};

struct RankedHit {
  bool is_tp = false;
  double score = 0.0;
};

// All-point interpolated AP: area under the precision envelope. Hits are
// ranked by descending score, ties in input order. nullopt when n_gt is 0.
std::optional<double> AveragePrecision(std::vector<RankedHit> hits,
                                       std::size_t n_gt);

struct VerbReport {
  int verb_id = 0;
  std::string verb;
  std::size_t gt_agent = 0;
  std::size_t gt_role = 0;
  std::size_t predictions_agent = 0;
  std::size_t predictions_role = 0;
  std::optional<double> ap_agent;
  std::optional<double> ap_role;
};

struct EvalReport {
  EvalScenario scenario;
  // One entry per taxonomy verb, in id order.
  std::vector<VerbReport> verbs;
  // Unweighted means over verbs with at least one ground-truth item.
  std::optional<double> mean_ap_agent;
  std::optional<double> mean_ap_role;
  std::size_t verbs_evaluated = 0;
  std::size_t gt_items = 0;
  std::size_t predictions = 0;
};

// Throws StructuralError when a prediction names an unknown verb or image.
// Per-verb matching runs on up to `jobs` threads; the report does not depend
// on `jobs`.
EvalReport Evaluate(const std::vector<Scene>& gt,
                    const std::vector<PredictedTriplet>& predictions,
                    const EvalScenario& scenario,
                    const Taxonomy& taxonomy = BuiltinTaxonomy(),
                    const ClassRegistry& registry = ClassRegistry::Coco(),
                    int jobs = 1);

// Deterministic: verbs in id order, fixed key order.
std::string ReportToJson(const EvalReport& report);
std::string FormatReportTable(const EvalReport& report);

}  // namespace h2o

#endif  // H2O_EVALUATOR_H_
