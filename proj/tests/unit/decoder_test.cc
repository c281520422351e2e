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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

#include "h2o/errors.h"

namespace h2o {
namespace {

const Taxonomy& Tax() { return BuiltinTaxonomy(); }
int Id(const char* verb) { return Tax().Get(verb).id; }

// Hand-filled bundle over a 64x64 grid; detection k sits on flat anchor
// 7 * k so that no two share an anchor.
class Builder {
 public:
  Builder()
      : grid_(BuildAnchorGrid(64, 64, AnchorGridConfig{})),
        bundle_(grid_.shape, kNumVerbs, 4) {}

  int Add(const std::string& class_name, std::vector<float> embedding = {}) {
    const int k = static_cast<int>(dets_.size());
    Detection det;
    det.bbox = BBox{static_cast<double>(100 * k), 0, 20, 20};
    det.class_name = class_name;
    det.score = 1.0;
    det.anchor_ref = grid_.shape.RefOf(Flat(k));
    dets_.push_back(det);
    embedding.resize(4, 0.0f);
    std::copy(embedding.begin(), embedding.end(),
              bundle_.EmbeddingAt(Flat(k)).begin());
    return k;
  }
  void Set(int det, const char* verb, float sigma_v, float sigma_p) {
    bundle_.VerbAt(Flat(det))[static_cast<std::size_t>(Id(verb))] = sigma_v;
    bundle_.PresenceAt(Flat(det))[static_cast<std::size_t>(Id(verb))] = sigma_p;
  }
  std::int64_t Flat(int det) const { return 7 * det; }
  const Detection& det(int k) const { return dets_[static_cast<std::size_t>(k)]; }

  std::vector<PredictedTriplet> Run(DecodeConfig config = {}) const {
    return Decode(bundle_, dets_, Tax(), config);
  }

  AnchorGrid grid_;
  DenseMapBundle bundle_;
  std::vector<Detection> dets_;
};

TEST(DecoderTest, AffinityValues) {
  const std::vector<float> a = {0, 0, 0};
  const std::vector<float> b = {3, 4, 0};
  EXPECT_DOUBLE_EQ(Affinity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(Affinity(a, b), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(Affinity(a, b, 5.0), 0.5);
}

TEST(DecoderTest, StandStillAloneGivesTwoTriplets) {
  Builder b;
  const int p = b.Add("person");
  b.Set(p, "stand", 1.0f, 0.0f);
  b.Set(p, "still", 1.0f, 0.0f);
  const std::vector<PredictedTriplet> out = b.Run();
  ASSERT_EQ(out.size(), 2u);
  for (const PredictedTriplet& t : out) {
    EXPECT_FALSE(t.target_box.has_value());
    EXPECT_DOUBLE_EQ(t.score, 1.0);
    EXPECT_EQ(t.subject_box, b.det(p).bbox);
  }
  EXPECT_EQ(out[0].verb, "stand");  // lower verb id first on ties
  EXPECT_EQ(out[1].verb, "still");
}

TEST(DecoderTest, ZeroBundleGivesNothing) {
  Builder b;
  b.Add("person");
  b.Add("cup");
  EXPECT_TRUE(b.Run().empty());
  EXPECT_TRUE(Decode(b.bundle_, {}, Tax()).empty());
}

TEST(DecoderTest, PartnerRanksFirst) {
  Builder b;
  const int a = b.Add("person", {0, 0, 0, 0});
  const int partner = b.Add("person", {0, 0, 0, 0});
  const int stranger = b.Add("person", {5, 0, 0, 0});
  b.Set(a, "punch", 0.9f, 0.9f);
  DecodeConfig config;
  config.triplet_floor = 0.0;
  std::vector<PredictedTriplet> punch;
  for (const PredictedTriplet& t : b.Run(config)) {
    if (t.verb == "punch" && t.subject_box == b.det(a).bbox) punch.push_back(t);
  }
  ASSERT_EQ(punch.size(), 3u);
  EXPECT_EQ(punch[0].target_box, b.det(partner).bbox);
  EXPECT_NEAR(punch[0].score, 0.81, 1e-6);
  EXPECT_EQ(punch[1].target_box, b.det(stranger).bbox);
  EXPECT_NEAR(punch[1].score, 0.81 / 6.0, 1e-6);
  EXPECT_FALSE(punch[2].target_box.has_value());
  EXPECT_NEAR(punch[2].score, 0.09, 1e-6);
}

TEST(DecoderTest, TargetKindsAreRespected) {
  Builder b;
  const int p = b.Add("person");
  const int q = b.Add("person");
  const int cup = b.Add("cup");
  b.Set(p, "hug", 1.0f, 1.0f);
  b.Set(p, "hold", 1.0f, 1.0f);
  for (const PredictedTriplet& t : b.Run()) {
    if (t.verb == "hug") EXPECT_EQ(t.target_box, b.det(q).bbox);
    if (t.verb == "hold") EXPECT_EQ(t.target_box, b.det(cup).bbox);
    EXPECT_NE(t.target_box, b.det(p).bbox);
  }
}

TEST(DecoderTest, InstrumentIsClosestOtherObject) {
  Builder b;
  const int p = b.Add("person");
  const int pizza = b.Add("pizza");
  const int fork = b.Add("fork", {0.1f, 0, 0, 0});
  b.Add("cup", {4, 0, 0, 0});
  b.Set(p, "eat", 1.0f, 1.0f);
  b.Set(p, "hold", 1.0f, 1.0f);
  bool seen = false;
  for (const PredictedTriplet& t : b.Run()) {
    if (t.verb == "eat" && t.target_box == b.det(pizza).bbox) {
      EXPECT_EQ(t.instrument_box, b.det(fork).bbox);
      seen = true;
    }
    if (t.verb == "eat" && t.target_box == b.det(fork).bbox) {
      EXPECT_EQ(t.instrument_box, b.det(pizza).bbox);
    }
    if (t.verb == "hold") EXPECT_FALSE(t.instrument_box.has_value());
  }
  EXPECT_TRUE(seen);
}

TEST(DecoderTest, TopKLimitsEachCategory) {
  Builder b;
  const int p = b.Add("person");
  for (int k = 0; k < 5; ++k) b.Add("cup");
  b.Set(p, "hold", 1.0f, 1.0f);
  b.Set(p, "lift", 1.0f, 1.0f);
  DecodeConfig config;
  config.per_category_topk = 3;
  EXPECT_EQ(b.Run(config).size(), 3u);
  config.per_category_topk = 0;
  EXPECT_TRUE(b.Run(config).empty());
}

TEST(DecoderTest, StructuralErrors) {
  Builder b;
  b.Add("person");
  std::vector<Detection> dets = b.dets_;
  dets[0].anchor_ref.reset();
  EXPECT_THROW(Decode(b.bundle_, dets, Tax()), StructuralError);
  dets = b.dets_;
  dets[0].anchor_ref = AnchorRef{9, 0, 0, 0};
  EXPECT_THROW(Decode(b.bundle_, dets, Tax()), StructuralError);
  const DenseMapBundle wrong(b.grid_.shape, 3, 4);
  EXPECT_THROW(Decode(wrong, b.dets_, Tax()), StructuralError);
}

// Random bundle with `persons` persons and `objects` objects.
Builder RandomBuilder(std::uint64_t seed, int persons, int objects) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  Builder b;
  for (int k = 0; k < persons + objects; ++k) {
    b.Add(k < persons ? "person" : "cup",
          {normal(rng), normal(rng), normal(rng), normal(rng)});
  }
  for (float& v : b.bundle_.verb()) v = unit(rng);
  for (float& v : b.bundle_.presence()) v = unit(rng);
  return b;
}

TEST(DecoderTest, ExclusiveCategoriesKeepTheArgmaxVerb) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Builder b = RandomBuilder(seed, 3, 3);
    DecodeConfig config;
    config.triplet_floor = 0.0;
    config.per_category_topk = -1;
    std::map<std::pair<double, Category>, int> count;
    for (const PredictedTriplet& t : b.Run(config)) {
      const Verb& verb = Tax().Get(t.verb);
      if (!verb.exclusive()) continue;
      ++count[{t.subject_box.x, verb.category}];
      const int det = static_cast<int>(t.subject_box.x / 100);
      const auto sigma = b.bundle_.VerbAt(b.Flat(det));
      for (int other : Tax().VerbsIn(verb.category)) {
        EXPECT_LE(sigma[static_cast<std::size_t>(other)],
                  sigma[static_cast<std::size_t>(verb.id)]);
      }
    }
    EXPECT_EQ(count.size(), 6u);
    for (const auto& [key, n] : count) EXPECT_EQ(n, 1);
  }
}

TEST(DecoderTest, PresenceMovesScoresMonotonically) {
  Builder low = RandomBuilder(3, 2, 2);
  Builder high = low;
  for (float& v : high.bundle_.presence()) v = std::min(1.0f, v + 0.2f);
  DecodeConfig config;
  config.triplet_floor = 0.0;
  config.per_category_topk = -1;
  using Key = std::tuple<double, std::string, double>;
  auto scores = [&](const Builder& b) {
    std::map<Key, double> out;
    for (const PredictedTriplet& t : b.Run(config)) {
      if (Tax().Get(t.verb).exclusive()) continue;
      out[{t.subject_box.x, t.verb, t.target_box ? t.target_box->x : -1.0}] =
          t.score;
    }
    return out;
  };
  const auto before = scores(low);
  const auto after = scores(high);
  ASSERT_EQ(before.size(), after.size());
  for (const auto& [key, score] : before) {
    if (std::get<2>(key) < 0) {
      EXPECT_LE(after.at(key), score + 1e-12);
    } else {
      EXPECT_GE(after.at(key), score - 1e-12);
    }
  }
}

// Floor first, then per-category top-K, then the global order.
std::vector<std::tuple<int, int, int, double>> ReferenceDecode(
    const Builder& b, const DecodeConfig& config) {
  struct Cand {
    double score;
    int s, v, t;
  };
  const auto n = static_cast<int>(b.dets_.size());
  std::map<Category, std::vector<Cand>> by_category;
  for (int s = 0; s < n; ++s) {
    if (!b.det(s).is_person()) continue;
    const auto sigma_v = b.bundle_.VerbAt(b.Flat(s));
    const auto sigma_p = b.bundle_.PresenceAt(b.Flat(s));
    for (Category c : kAllCategories) {
      std::vector<Cand> cands;
      std::vector<int> verbs = Tax().VerbsIn(c);
      if (IsExclusive(c)) {
        int best = verbs.front();
        for (int v : verbs) {
          if (sigma_v[static_cast<std::size_t>(v)] >
              sigma_v[static_cast<std::size_t>(best)]) {
            best = v;
          }
        }
        verbs = {best};
      }
      for (int v : verbs) {
        const double sv = sigma_v[static_cast<std::size_t>(v)];
        const double sp = sigma_p[static_cast<std::size_t>(v)];
        std::vector<Cand> mine = {{sv * (1.0 - sp), s, v, -1}};
        for (int t = 0; t < n; ++t) {
          if (t == s || !Tax().at(v).target_rule.Accepts(b.det(t).is_person())) {
            continue;
          }
          const double aff = Affinity(b.bundle_.EmbeddingAt(b.Flat(s)),
                                      b.bundle_.EmbeddingAt(b.Flat(t)));
          mine.push_back({sv * sp * aff, s, v, t});
        }
        if (IsExclusive(c)) {
          Cand best = mine.front();
          for (const Cand& m : mine) {
            if (m.score > best.score) best = m;
          }
          mine = {best};
        }
        cands.insert(cands.end(), mine.begin(), mine.end());
      }
      for (const Cand& m : cands) {
        if (m.score >= config.triplet_floor) by_category[c].push_back(m);
      }
    }
  }
  auto before = [](const Cand& x, const Cand& y) {
    if (x.score != y.score) return x.score > y.score;
    return std::tie(x.s, x.v, x.t) < std::tie(y.s, y.v, y.t);
  };
  std::vector<Cand> all;
  for (auto& [c, cands] : by_category) {
    std::sort(cands.begin(), cands.end(), before);
    if (cands.size() > static_cast<std::size_t>(config.per_category_topk)) {
      cands.resize(static_cast<std::size_t>(config.per_category_topk));
    }
    all.insert(all.end(), cands.begin(), cands.end());
  }
  std::sort(all.begin(), all.end(), before);
  std::vector<std::tuple<int, int, int, double>> out;
  for (const Cand& m : all) out.emplace_back(m.s, m.v, m.t, m.score);
  return out;
}

TEST(DecoderTest, MatchesFloorFirstReference) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Builder b = RandomBuilder(seed, 4, 5);
    for (double floor : {0.0, 0.1, 0.3}) {
      for (int topk : {5, 40, 1000}) {
        DecodeConfig config;
        config.triplet_floor = floor;
        config.per_category_topk = topk;
        const auto expected = ReferenceDecode(b, config);
        const std::vector<PredictedTriplet> got = b.Run(config);
        ASSERT_EQ(got.size(), expected.size())
            << seed << " " << floor << " " << topk;
        for (std::size_t k = 0; k < got.size(); ++k) {
          const auto& [s, v, t, score] = expected[k];
          EXPECT_EQ(got[k].subject_box, b.det(s).bbox);
          EXPECT_EQ(got[k].verb, Tax().at(v).name);
          if (t < 0) {
            EXPECT_FALSE(got[k].target_box.has_value());
          } else {
            EXPECT_EQ(got[k].target_box, b.det(t).bbox);
          }
          EXPECT_DOUBLE_EQ(got[k].score, score);
        }
      }
    }
  }
}

TEST(DecoderTest, Deterministic) {
  const Builder b = RandomBuilder(11, 3, 4);
  EXPECT_EQ(b.Run(), b.Run());
}

}  // namespace
}  // namespace h2o
