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

// The fixed 51-verb interaction taxonomy.
//
// Verbs are grouped in five categories. Posture and Motion are exclusive and
// mandatory: every person carries exactly one verb of each. The remaining
// three categories are free: a person may carry none, one or several of
// their verbs. Verb ids are dense, start at 0 and follow the enumeration
// order Posture, Motion, ObjectInteraction, Social, Violent; they index the
// verb channels of dense maps and must stay stable.

#ifndef H2O_TAXONOMY_H_
#define H2O_TAXONOMY_H_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace h2o {

enum class Category {
  kPosture = 0,
  kMotion = 1,
  kObjectInteraction = 2,
  kSocial = 3,
  kViolent = 4,
};

inline constexpr std::array<Category, 5> kAllCategories = {
    Category::kPosture, Category::kMotion, Category::kObjectInteraction,
    Category::kSocial, Category::kViolent};

std::string_view CategoryName(Category category);

constexpr bool IsExclusive(Category category) {
  return category == Category::kPosture || category == Category::kMotion;
}

constexpr bool IsMandatory(Category category) { return IsExclusive(category); }

enum class TargetKind {
  kNone,
  kObjectOnly,
  kPersonOnly,
  kObjectOrPerson,
};

std::string_view TargetKindName(TargetKind kind);

// What a verb may point at. A target is always optional; when present its
// instance kind must agree with `kind`.
struct TargetRule {
  TargetKind kind = TargetKind::kNone;
  bool instrument_allowed = false;

  // True when an instance of the given kind may be the target of the verb.
  bool Accepts(bool target_is_person) const;
};

struct Verb {
  int id = -1;
  std::string name;
  Category category = Category::kPosture;
  TargetRule target_rule;

  bool exclusive() const { return IsExclusive(category); }
  bool mandatory() const { return IsMandatory(category); }
};

// Immutable verb registry with lookup by id and by canonical name.
class Taxonomy {
 public:
  explicit Taxonomy(std::vector<Verb> verbs);

  std::size_t size() const { return verbs_.size(); }
  const std::vector<Verb>& verbs() const { return verbs_; }

  // Throws StructuralError when out of range.
  const Verb& at(int id) const;

  // Returns nullptr for unknown names.
  const Verb* Find(std::string_view name) const;

  // Like Find() but throws StructuralError naming the unknown verb.
  const Verb& Get(std::string_view name) const;

  // Verb ids of a category, ascending.
  const std::vector<int>& VerbsIn(Category category) const {
    return by_category_[static_cast<std::size_t>(category)];
  }

 private:
  std::vector<Verb> verbs_;
  std::unordered_map<std::string, int> by_name_;
  std::array<std::vector<int>, kAllCategories.size()> by_category_;
};

inline constexpr int kNumVerbs = 51;

// The compiled-in registry. Constructed once; safe to share across threads.
const Taxonomy& BuiltinTaxonomy();

// Human-readable fixed-width table of the registry, one verb per row.
std::string FormatTaxonomyTable(const Taxonomy& taxonomy);

}  // namespace h2o

#endif  // H2O_TAXONOMY_H_
