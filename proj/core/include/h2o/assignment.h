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

// Ground-truth supervision of the three dense interaction tasks.

#ifndef H2O_ASSIGNMENT_H_
#define H2O_ASSIGNMENT_H_

#include <cstdint>
#include <vector>

#include "h2o/anchors.h"
#include "h2o/taxonomy.h"
#include "h2o/types.h"

namespace h2o {

inline constexpr double kPositiveAnchorIou = 0.5;

// Positive verb channels of one anchor. Channel v (< V) is the active voice
// of verb v, channel V + v its passive voice.
struct AnchorLabels {
  std::int64_t anchor = 0;
  std::vector<int> positive_channels;  // ascending

  friend bool operator==(const AnchorLabels&, const AnchorLabels&) = default;
};

// Target-presence labels of one subject anchor, one entry per verb.
struct PresenceLabels {
  std::int64_t anchor = 0;
  std::vector<std::uint8_t> labels;

  friend bool operator==(const PresenceLabels&, const PresenceLabels&) =
      default;
};

struct Assignment {
  // Per flat anchor: index into scene.instances, or -1.
  std::vector<int> anchor_owner;
  // Per scene instance (same order as scene.instances): its positive
  // anchors, ascending.
  std::vector<std::vector<std::int64_t>> positives;
  // Ids of instances without any positive anchor.
  std::vector<InstanceId> uncovered;
  // One entry per anchor of A+ (anchors owned by an instance that takes part
  // in at least one interaction), ascending by anchor.
  std::vector<AnchorLabels> verb_labels;
  // One entry per anchor of every subject instance, ascending by anchor.
  std::vector<PresenceLabels> presence_labels;
  // Embedding groups: the positive anchors of the instances of one
  // connected component of the interaction graph.
  std::vector<std::vector<std::int64_t>> groups;
  // Scene instance indices of each group, ascending.
  std::vector<std::vector<std::size_t>> group_members;

  std::vector<std::int64_t> APlus() const;
};

// An anchor is positive for instance i iff IoU(anchor, box_i) >= 0.5 and i
// maximizes that IoU (ties go to the lower instance id). Subject anchors get
// active-voice labels for the subject's verbs, target anchors passive-voice
// labels for the verbs they receive. Presence(anchor, v) = 1 iff the
// subject has verb v with a non-empty target. Throws StructuralError on an
// unknown verb or instance id.
Assignment AssignAnchors(const AnchorGrid& grid, const Scene& scene,
                         const Taxonomy& taxonomy = BuiltinTaxonomy());

// Connected components of the interaction graph over instances that appear
// in at least one annotation (subject, target and instrument are linked).
// Returns scene instance indices per component, ordered by smallest member.
std::vector<std::vector<std::size_t>> InteractionComponents(
    const Scene& scene);

}  // namespace h2o

#endif  // H2O_ASSIGNMENT_H_
