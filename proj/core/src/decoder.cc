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

#include "h2o/decoder.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "h2o/errors.h"

namespace h2o {

namespace {

// (subject, verb, target + 1) packed in 21-bit fields, so that key order is
// tuple order with "no target" first.
constexpr int kKeyBits = 21;
constexpr std::uint64_t kKeyMask = (std::uint64_t{1} << kKeyBits) - 1;

struct Candidate {
  double score = 0.0;
  std::uint64_t key = 0;

  Candidate() = default;
  Candidate(double score, int subject, int verb, int target)
      : score(score),
        key((static_cast<std::uint64_t>(subject) << (2 * kKeyBits)) |
            (static_cast<std::uint64_t>(verb) << kKeyBits) |
            static_cast<std::uint64_t>(target + 1)) {}

  int subject() const { return static_cast<int>(key >> (2 * kKeyBits)); }
  int verb() const { return static_cast<int>((key >> kKeyBits) & kKeyMask); }
  int target() const { return static_cast<int>(key & kKeyMask) - 1; }
};

bool RanksBefore(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.key < b.key;
}

}  // namespace

double Affinity(std::span<const float> a, std::span<const float> b,
                double bandwidth) {
  double dist2 = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double diff = static_cast<double>(a[k]) - static_cast<double>(b[k]);
    dist2 += diff * diff;
  }
  return 1.0 / (1.0 + std::sqrt(dist2) / bandwidth);
}

std::vector<PredictedTriplet> Decode(const DenseMapBundle& bundle,
                                     const std::vector<Detection>& detections,
                                     const Taxonomy& taxonomy,
                                     const DecodeConfig& config) {
  const int num_verbs = static_cast<int>(taxonomy.size());
  if (bundle.num_verbs() != num_verbs) {
    throw StructuralError("bundle has " + std::to_string(bundle.num_verbs()) +
                          " verbs, taxonomy has " + std::to_string(num_verbs));
  }
  const auto anchors = static_cast<std::size_t>(bundle.shape().num_anchors());
  if (bundle.verb().size() != anchors * bundle.verb_channels() ||
      bundle.presence().size() != anchors * bundle.num_verbs() ||
      bundle.embedding().size() != anchors * bundle.embedding_dim()) {
    throw StructuralError("bundle planes do not match its grid");
  }

  const std::vector<Detection> kept = SelectDetections(detections, config.nms);
  const int n = static_cast<int>(kept.size());
  if (static_cast<std::uint64_t>(n) >= kKeyMask) {
    throw StructuralError("too many detections to decode: " +
                          std::to_string(n));
  }
  std::vector<std::int64_t> flat(kept.size());
  for (int i = 0; i < n; ++i) {
    const Detection& det = kept[static_cast<std::size_t>(i)];
    if (!det.anchor_ref) {
      throw StructuralError("detection " + std::to_string(i) +
                            " has no anchor_ref");
    }
    flat[static_cast<std::size_t>(i)] = bundle.shape().FlatIndex(*det.anchor_ref);
  }

  std::vector<int> persons;
  for (int i = 0; i < n; ++i) {
    if (kept[static_cast<std::size_t>(i)].is_person()) persons.push_back(i);
  }

  constexpr std::size_t kCategories = kAllCategories.size();

  // Candidate counts depend only on the detections and the taxonomy, so
  // every buffer is sized up front and filled without looking at scores.
  const int n_persons_kept = static_cast<int>(persons.size());
  const int n_objects_kept = n - n_persons_kept;
  std::array<std::size_t, kCategories> capacity{};
  for (Category category : kAllCategories) {
    std::size_t per_subject = 1;
    if (!IsExclusive(category)) {
      per_subject = 0;
      for (int id : taxonomy.VerbsIn(category)) {
        const TargetRule& rule = taxonomy.at(id).target_rule;
        per_subject += 1;
        if (rule.Accepts(true)) per_subject += n_persons_kept - 1;
        if (rule.Accepts(false)) per_subject += n_objects_kept;
      }
    }
    capacity[static_cast<std::size_t>(category)] = per_subject * persons.size();
  }
  std::array<std::vector<Candidate>, kCategories> by_category;
  for (std::size_t c = 0; c < kCategories; ++c) {
    by_category[c].reserve(capacity[c]);
  }

  std::vector<double> affinity(kept.size());
  // Per subject: the two object detections closest in embedding space, and
  // their affinities. The instrument of a triplet is the closest one that is
  // not its target.
  std::vector<std::array<int, 2>> instruments(kept.size(), {-1, -1});
  std::vector<std::array<double, 2>> instrument_affinity(kept.size(),
                                                         {0.0, 0.0});

  for (int s : persons) {
    const auto si = static_cast<std::size_t>(s);
    const std::span<const float> verbs = bundle.VerbAt(flat[si]);
    const std::span<const float> presence = bundle.PresenceAt(flat[si]);
    const std::span<const float> embedding = bundle.EmbeddingAt(flat[si]);
    for (int t = 0; t < n; ++t) {
      affinity[static_cast<std::size_t>(t)] =
          t == s ? 0.0
                 : Affinity(embedding,
                            bundle.EmbeddingAt(flat[static_cast<std::size_t>(t)]),
                            config.affinity_bandwidth);
    }

    std::array<int, 2>& top = instruments[si];
    for (int i = 0; i < n; ++i) {
      if (i == s || kept[static_cast<std::size_t>(i)].is_person()) continue;
      const double a = affinity[static_cast<std::size_t>(i)];
      if (top[0] < 0 || a > affinity[static_cast<std::size_t>(top[0])]) {
        top[1] = top[0];
        top[0] = i;
      } else if (top[1] < 0 || a > affinity[static_cast<std::size_t>(top[1])]) {
        top[1] = i;
      }
    }
    for (std::size_t k = 0; k < 2; ++k) {
      if (top[k] >= 0) {
        instrument_affinity[si][k] = affinity[static_cast<std::size_t>(top[k])];
      }
    }

    // Every legal candidate of `verb`, or only the best one.
    auto score_verb = [&](const Verb& verb, bool best_only,
                          std::vector<Candidate>& out) {
      const double sigma_v = verbs[static_cast<std::size_t>(verb.id)];
      const double sigma_p = presence[static_cast<std::size_t>(verb.id)];
      Candidate best(EmptyTargetScore(sigma_v, sigma_p), s, verb.id, -1);
      if (!best_only) out.push_back(best);
      for (int t = 0; t < n; ++t) {
        if (t == s ||
            !verb.target_rule.Accepts(kept[static_cast<std::size_t>(t)].is_person())) {
          continue;
        }
        const Candidate c(TargetScore(sigma_v, sigma_p,
                                      affinity[static_cast<std::size_t>(t)]),
                          s, verb.id, t);
        if (best_only) {
          if (c.score > best.score) best = c;
        } else {
          out.push_back(c);
        }
      }
      if (best_only) out.push_back(best);
    };

    for (Category category : kAllCategories) {
      std::vector<Candidate>& out =
          by_category[static_cast<std::size_t>(category)];
      const std::vector<int>& ids = taxonomy.VerbsIn(category);
      if (IsExclusive(category)) {
        int argmax = ids.front();
        for (int id : ids) {
          if (verbs[static_cast<std::size_t>(id)] >
              verbs[static_cast<std::size_t>(argmax)]) {
            argmax = id;
          }
        }
        score_verb(taxonomy.at(argmax), /*best_only=*/true, out);
      } else {
        for (int id : ids) score_verb(taxonomy.at(id), /*best_only=*/false, out);
      }
    }
  }

  // Top-K per category first, then the floor: the same result as flooring
  // first, with work that does not depend on how many scores clear it.
  std::vector<Candidate> all;
  for (std::vector<Candidate>& candidates : by_category) {
    if (config.per_category_topk >= 0 &&
        candidates.size() > static_cast<std::size_t>(config.per_category_topk)) {
      const auto k = static_cast<std::ptrdiff_t>(config.per_category_topk);
      std::nth_element(candidates.begin(), candidates.begin() + k,
                       candidates.end(), RanksBefore);
      candidates.resize(static_cast<std::size_t>(k));
    }
    for (const Candidate& c : candidates) {
      if (c.score >= config.triplet_floor) all.push_back(c);
    }
  }
  std::sort(all.begin(), all.end(), RanksBefore);

  std::vector<int> instrument_of(all.size(), -1);
  for (std::size_t k = 0; k < all.size(); ++k) {
    const Candidate& c = all[k];
    if (c.target() < 0 ||
        !taxonomy.at(c.verb()).target_rule.instrument_allowed) {
      continue;
    }
    const auto si = static_cast<std::size_t>(c.subject());
    const std::size_t slot = instruments[si][0] != c.target() ? 0 : 1;
    const int instrument = instruments[si][slot];
    if (instrument < 0) continue;
    const Verb& verb = taxonomy.at(c.verb());
    const std::span<const float> verbs = bundle.VerbAt(flat[si]);
    const std::span<const float> presence = bundle.PresenceAt(flat[si]);
    if (TargetScore(verbs[static_cast<std::size_t>(verb.id)],
                    presence[static_cast<std::size_t>(verb.id)],
                    instrument_affinity[si][slot]) >= config.triplet_floor) {
      instrument_of[k] = instrument;
    }
  }

  std::vector<PredictedTriplet> triplets;
  triplets.reserve(all.size());
  for (std::size_t k = 0; k < all.size(); ++k) {
    const Candidate& c = all[k];
    PredictedTriplet triplet;
    triplet.image_id = bundle.image_id();
    triplet.subject_box = kept[static_cast<std::size_t>(c.subject())].bbox;
    triplet.verb = taxonomy.at(c.verb()).name;
    if (c.target() >= 0) {
      const Detection& target = kept[static_cast<std::size_t>(c.target())];
      triplet.target_box = target.bbox;
      triplet.target_class = target.class_name;
    }
    if (instrument_of[k] >= 0) {
      triplet.instrument_box =
          kept[static_cast<std::size_t>(instrument_of[k])].bbox;
    }
    triplet.score = c.score;
    triplets.push_back(std::move(triplet));
  }
  return triplets;
}

}  // namespace h2o
