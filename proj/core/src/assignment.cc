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

#include "h2o/assignment.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "h2o/errors.h"

namespace h2o {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t Find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::unordered_map<InstanceId, std::size_t> IndexInstances(const Scene& scene) {
  std::unordered_map<InstanceId, std::size_t> index;
  for (std::size_t i = 0; i < scene.instances.size(); ++i) {
    if (!index.emplace(scene.instances[i].id, i).second) {
      throw StructuralError("duplicate instance id " +
                            std::to_string(scene.instances[i].id));
    }
  }
  return index;
}

std::size_t Resolve(const std::unordered_map<InstanceId, std::size_t>& index,
                    InstanceId id) {
  auto it = index.find(id);
  if (it == index.end()) {
    throw StructuralError("instance id " + std::to_string(id) +
                          " does not resolve");
  }
  return it->second;
}

}  // namespace

std::vector<std::int64_t> Assignment::APlus() const {
  std::vector<std::int64_t> anchors;
  anchors.reserve(verb_labels.size());
  for (const AnchorLabels& labels : verb_labels) anchors.push_back(labels.anchor);
  return anchors;
}

std::vector<std::vector<std::size_t>> InteractionComponents(
    const Scene& scene) {
  const auto index = IndexInstances(scene);
  DisjointSets sets(scene.instances.size());
  std::vector<bool> involved(scene.instances.size(), false);
  for (const InteractionAnnotation& ann : scene.interactions) {
    const std::size_t s = Resolve(index, ann.subject_id);
    involved[s] = true;
    for (const auto& other : {ann.target_id, ann.instrument_id}) {
      if (!other) continue;
      const std::size_t o = Resolve(index, *other);
      involved[o] = true;
      sets.Union(s, o);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < scene.instances.size(); ++i) {
    if (involved[i]) by_root[sets.Find(i)].push_back(i);
  }
  std::vector<std::vector<std::size_t>> components;
  for (auto& [root, members] : by_root) components.push_back(std::move(members));
  std::sort(components.begin(), components.end());
  return components;
}

Assignment AssignAnchors(const AnchorGrid& grid, const Scene& scene,
                         const Taxonomy& taxonomy) {
  const auto index = IndexInstances(scene);
  const std::size_t n_instances = scene.instances.size();
  const int num_verbs = static_cast<int>(taxonomy.size());

  Assignment out;
  out.anchor_owner.assign(grid.boxes.size(), -1);
  out.positives.resize(n_instances);

  for (std::size_t a = 0; a < grid.boxes.size(); ++a) {
    double best_iou = 0.0;
    int best = -1;
    for (std::size_t i = 0; i < n_instances; ++i) {
      const double iou = Iou(grid.boxes[a], scene.instances[i].bbox);
      if (iou < kPositiveAnchorIou) continue;
      if (best < 0 || iou > best_iou ||
          (iou == best_iou &&
           scene.instances[i].id <
               scene.instances[static_cast<std::size_t>(best)].id)) {
        best = static_cast<int>(i);
        best_iou = iou;
      }
    }
    out.anchor_owner[a] = best;
    if (best >= 0) {
      out.positives[static_cast<std::size_t>(best)].push_back(
          static_cast<std::int64_t>(a));
    }
  }
  for (std::size_t i = 0; i < n_instances; ++i) {
    if (out.positives[i].empty()) out.uncovered.push_back(scene.instances[i].id);
  }

  // Per-instance verb channels and presence flags.
  std::vector<std::set<int>> channels(n_instances);
  std::vector<bool> interacting(n_instances, false);
  std::vector<bool> is_subject(n_instances, false);
  std::vector<std::vector<std::uint8_t>> presence(n_instances);
  for (const InteractionAnnotation& ann : scene.interactions) {
    const Verb& verb = taxonomy.Get(ann.verb);
    const std::size_t s = Resolve(index, ann.subject_id);
    interacting[s] = true;
    is_subject[s] = true;
    channels[s].insert(verb.id);
    if (presence[s].empty()) presence[s].assign(num_verbs, 0);
    if (ann.target_id) {
      presence[s][static_cast<std::size_t>(verb.id)] = 1;
      const std::size_t t = Resolve(index, *ann.target_id);
      interacting[t] = true;
      channels[t].insert(num_verbs + verb.id);
    }
    if (ann.instrument_id) {
      interacting[Resolve(index, *ann.instrument_id)] = true;
    }
  }

  for (std::size_t a = 0; a < out.anchor_owner.size(); ++a) {
    const int owner = out.anchor_owner[a];
    if (owner < 0) continue;
    const auto i = static_cast<std::size_t>(owner);
    if (interacting[i]) {
      out.verb_labels.push_back(AnchorLabels{
          static_cast<std::int64_t>(a),
          std::vector<int>(channels[i].begin(), channels[i].end())});
    }
    if (is_subject[i]) {
      out.presence_labels.push_back(
          PresenceLabels{static_cast<std::int64_t>(a), presence[i]});
    }
  }

  for (std::vector<std::size_t>& members : InteractionComponents(scene)) {
    std::vector<std::int64_t> anchors;
    for (std::size_t i : members) {
      anchors.insert(anchors.end(), out.positives[i].begin(),
                     out.positives[i].end());
    }
    if (anchors.empty()) continue;
    std::sort(anchors.begin(), anchors.end());
    out.groups.push_back(std::move(anchors));
    out.group_members.push_back(std::move(members));
  }
  return out;
}

}  // namespace h2o
