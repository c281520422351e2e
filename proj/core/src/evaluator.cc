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

#include "h2o/evaluator.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <tuple>

#include "h2o/errors.h"
#include "h2o/geometry.h"
#include "h2o/parallel.h"
#include "json.hpp"

namespace h2o {

namespace {

struct GtItem {
  ImageId image = 0;
  BBox subject;
  std::optional<BBox> target;
};

struct PredItem {
  ImageId image = 0;
  BBox subject;
  std::optional<BBox> target;
  double score = 0.0;
};

struct VerbData {
  std::vector<GtItem> agent_gt;
  std::vector<GtItem> role_gt;
  std::vector<PredItem> agent_preds;
  std::vector<PredItem> role_preds;
};

// Greedy matching in score order. Among the free items a prediction may
// take, exact target agreement beats a Role2 relaxation, then the larger
// min(subject IoU, target IoU), then annotation order.
std::vector<RankedHit> Match(const std::vector<GtItem>& items,
                             std::vector<PredItem> preds,
                             const EvalScenario& scenario, bool role) {
  std::map<ImageId, std::vector<std::size_t>> by_image;
  for (std::size_t i = 0; i < items.size(); ++i) {
    by_image[items[i].image].push_back(i);
  }
  std::stable_sort(preds.begin(), preds.end(),
                   [](const PredItem& a, const PredItem& b) {
                     return a.score > b.score;
                   });
  const double thr = scenario.iou_threshold;
  std::vector<bool> taken(items.size(), false);
  std::vector<RankedHit> hits;
  hits.reserve(preds.size());
  for (const PredItem& pred : preds) {
    std::optional<std::size_t> best;
    bool best_strict = false;
    double best_overlap = -1.0;
    auto found = by_image.find(pred.image);
    if (found != by_image.end()) {
      for (std::size_t i : found->second) {
        if (taken[i]) continue;
        const GtItem& item = items[i];
        const double subject_iou = Iou(pred.subject, item.subject);
        if (subject_iou < thr) continue;
        bool strict = true;
        double overlap = subject_iou;
        if (role) {
          if (item.target) {
            if (!pred.target) continue;
            const double target_iou = Iou(*pred.target, *item.target);
            if (target_iou < thr) continue;
            overlap = std::min(overlap, target_iou);
          } else if (pred.target) {
            if (scenario.role == RoleVariant::kRole1) continue;
            strict = false;
          }
        }
        if (!best || (strict && !best_strict) ||
            (strict == best_strict && overlap > best_overlap)) {
          best = i;
          best_strict = strict;
          best_overlap = overlap;
        }
      }
    }
    if (best) taken[*best] = true;
    hits.push_back(RankedHit{best.has_value(), pred.score});
  }
  return hits;
}

std::optional<double> Mean(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::string_view EvalModeName(EvalMode mode) {
  return mode == EvalMode::kOriginal ? "original" : "objectness";
}

std::string_view RoleVariantName(RoleVariant role) {
  return role == RoleVariant::kRole1 ? "role1" : "role2";
}

EvalMode ParseEvalMode(std::string_view text) {
  if (text == "original") return EvalMode::kOriginal;
  if (text == "objectness") return EvalMode::kObjectness;
  throw std::invalid_argument("mode must be 'original' or 'objectness', got '" +
                              std::string(text) + "'");
}

RoleVariant ParseRoleVariant(std::string_view text) {
  if (text == "1" || text == "role1") return RoleVariant::kRole1;
  if (text == "2" || text == "role2") return RoleVariant::kRole2;
  throw std::invalid_argument("role must be 1 or 2, got '" + std::string(text) +
                              "'");
}

void EvalScenario::Validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw std::invalid_argument("IoU threshold must lie in (0, 1)");
  }
}

std::optional<double> AveragePrecision(std::vector<RankedHit> hits,
                                       std::size_t n_gt) {
  if (n_gt == 0) return std::nullopt;
  std::stable_sort(hits.begin(), hits.end(),
                   [](const RankedHit& a, const RankedHit& b) {
                     return a.score > b.score;
                   });
  std::vector<double> precision(hits.size());
  std::size_t tp = 0;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    if (hits[k].is_tp) ++tp;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
  }
  for (std::size_t k = hits.size(); k-- > 1;) {
    precision[k - 1] = std::max(precision[k - 1], precision[k]);
  }
  // Each true positive adds a recall step of 1 / n_gt at the envelope
  // precision of its rank.
  double ap = 0.0;
  std::size_t recalled = 0;
  for (std::size_t k = 0; k < hits.size() && recalled < n_gt; ++k) {
    if (!hits[k].is_tp) continue;
    ++recalled;
    ap += precision[k];
  }
  return ap / static_cast<double>(n_gt);
}

EvalReport Evaluate(const std::vector<Scene>& gt,
                    const std::vector<PredictedTriplet>& predictions,
                    const EvalScenario& scenario, const Taxonomy& taxonomy,
                    const ClassRegistry& registry, int jobs) {
  scenario.Validate();
  const bool original = scenario.mode == EvalMode::kOriginal;
  std::vector<VerbData> data(taxonomy.size());

  std::map<ImageId, const Scene*> scenes;
  for (const Scene& scene : gt) scenes[scene.image_id] = &scene;

  std::size_t gt_items = 0;
  for (const Scene& scene : gt) {
    std::map<std::pair<InstanceId, int>, bool> agent_seen;
    for (const InteractionAnnotation& ann : scene.interactions) {
      const Verb& verb = taxonomy.Get(ann.verb);
      const Instance* subject = scene.FindInstance(ann.subject_id);
      if (subject == nullptr) {
        throw StructuralError("image " + std::to_string(scene.image_id) +
                              ": unknown subject " +
                              std::to_string(ann.subject_id));
      }
      GtItem item{scene.image_id, subject->bbox, std::nullopt};
      VerbData& verb_data = data[static_cast<std::size_t>(verb.id)];
      if (agent_seen.emplace(std::pair(ann.subject_id, verb.id), true).second) {
        verb_data.agent_gt.push_back(item);
      }
      if (ann.target_id) {
        const Instance* target = scene.FindInstance(*ann.target_id);
        if (target == nullptr) {
          throw StructuralError("image " + std::to_string(scene.image_id) +
                                ": unknown target " +
                                std::to_string(*ann.target_id));
        }
        if (!original || registry.Contains(target->class_name)) {
          item.target = target->bbox;
        }
      }
      verb_data.role_gt.push_back(item);
      ++gt_items;
    }
  }

  using AgentKey = std::tuple<ImageId, double, double, double, double>;
  std::vector<std::map<AgentKey, std::size_t>> agent_index(taxonomy.size());
  for (std::size_t p = 0; p < predictions.size(); ++p) {
    const PredictedTriplet& pred = predictions[p];
    const Verb* verb = taxonomy.Find(pred.verb);
    if (verb == nullptr) {
      throw StructuralError("prediction " + std::to_string(p) +
                            ": unknown verb '" + pred.verb + "'");
    }
    if (scenes.find(pred.image_id) == scenes.end()) {
      throw StructuralError("prediction " + std::to_string(p) +
                            ": unknown image " + std::to_string(pred.image_id));
    }
    VerbData& verb_data = data[static_cast<std::size_t>(verb->id)];
    PredItem item{pred.image_id, pred.subject_box, pred.target_box, pred.score};
    if (original && item.target && pred.target_class &&
        !registry.Contains(*pred.target_class)) {
      item.target.reset();
    }
    verb_data.role_preds.push_back(item);

    // One agent prediction per (image, subject box, verb), at its best score.
    const AgentKey key{pred.image_id, pred.subject_box.x, pred.subject_box.y,
                       pred.subject_box.w, pred.subject_box.h};
    auto& index = agent_index[static_cast<std::size_t>(verb->id)];
    auto [it, inserted] = index.emplace(key, verb_data.agent_preds.size());
    if (inserted) {
      verb_data.agent_preds.push_back(
          PredItem{pred.image_id, pred.subject_box, std::nullopt, pred.score});
    } else {
      double& score = verb_data.agent_preds[it->second].score;
      score = std::max(score, pred.score);
    }
  }

  EvalReport report;
  report.scenario = scenario;
  report.gt_items = gt_items;
  report.predictions = predictions.size();
  report.verbs.resize(taxonomy.size());
  ParallelFor(taxonomy.size(), jobs, [&](std::size_t v) {
    const VerbData& verb_data = data[v];
    VerbReport& out = report.verbs[v];
    out.verb_id = static_cast<int>(v);
    out.verb = taxonomy.at(static_cast<int>(v)).name;
    out.gt_agent = verb_data.agent_gt.size();
    out.gt_role = verb_data.role_gt.size();
    out.predictions_agent = verb_data.agent_preds.size();
    out.predictions_role = verb_data.role_preds.size();
    out.ap_agent = AveragePrecision(
        Match(verb_data.agent_gt, verb_data.agent_preds, scenario, false),
        out.gt_agent);
    out.ap_role = AveragePrecision(
        Match(verb_data.role_gt, verb_data.role_preds, scenario, true),
        out.gt_role);
  });

  std::vector<double> agent;
  std::vector<double> role;
  for (const VerbReport& verb : report.verbs) {
    if (verb.ap_agent) agent.push_back(*verb.ap_agent);
    if (verb.ap_role) role.push_back(*verb.ap_role);
  }
  report.verbs_evaluated = role.size();
  report.mean_ap_agent = Mean(agent);
  report.mean_ap_role = Mean(role);
  return report;
}

std::string ReportToJson(const EvalReport& report) {
  using nlohmann::ordered_json;
  auto optional_value = [](const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  ordered_json verbs = ordered_json::array();
  for (const VerbReport& verb : report.verbs) {
    verbs.push_back({{"id", verb.verb_id},
                     {"verb", verb.verb},
                     {"gt_agent", verb.gt_agent},
                     {"gt_role", verb.gt_role},
                     {"predictions_agent", verb.predictions_agent},
                     {"predictions_role", verb.predictions_role},
                     {"ap_agent", optional_value(verb.ap_agent)},
                     {"ap_role", optional_value(verb.ap_role)}});
  }
  const ordered_json doc = {
      {"scenario",
       {{"mode", EvalModeName(report.scenario.mode)},
        {"role", RoleVariantName(report.scenario.role)},
        {"iou_threshold", report.scenario.iou_threshold}}},
      {"mean_ap_agent", optional_value(report.mean_ap_agent)},
      {"mean_ap_role", optional_value(report.mean_ap_role)},
      {"verbs_evaluated", report.verbs_evaluated},
      {"gt_items", report.gt_items},
      {"predictions", report.predictions},
      {"verbs", std::move(verbs)}};
  return doc.dump(2) + "\n";
}

std::string FormatReportTable(const EvalReport& report) {
  auto cell = [](const std::optional<double>& v) {
    char buf[16];
    if (!v) return std::string("     -");
    std::snprintf(buf, sizeof(buf), "%6.2f", 100.0 * *v);
    return std::string(buf);
  };
  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-22s %6s %6s %8s %8s\n", "verb", "gt",
                "preds", "AP_agent", "AP_role");
  out += line;
  for (const VerbReport& verb : report.verbs) {
    if (verb.gt_role == 0 && verb.predictions_role == 0) continue;
    std::snprintf(line, sizeof(line), "%-22s %6zu %6zu   %s   %s\n",
                  verb.verb.c_str(), verb.gt_role, verb.predictions_role,
                  cell(verb.ap_agent).c_str(), cell(verb.ap_role).c_str());
    out += line;
  }
  std::snprintf(line, sizeof(line), "%-36s   %s   %s\n", "mean",
                cell(report.mean_ap_agent).c_str(),
                cell(report.mean_ap_role).c_str());
  out += line;
  std::snprintf(line, sizeof(line), "scenario: %s, %s, IoU >= %.2f, %zu verbs\n",
                std::string(EvalModeName(report.scenario.mode)).c_str(),
                std::string(RoleVariantName(report.scenario.role)).c_str(),
                report.scenario.iou_threshold, report.verbs_evaluated);
  out += line;
  return out;
}

}  // namespace h2o
