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

#include "h2o/taxonomy.h"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "h2o/errors.h"

namespace h2o {

namespace {

struct VerbSpec {
  const char* name;
  Category category;
  TargetKind kind;
  bool instrument;
};

constexpr TargetKind kAny = TargetKind::kObjectOrPerson;
constexpr TargetKind kObject = TargetKind::kObjectOnly;
constexpr TargetKind kPerson = TargetKind::kPersonOnly;

// Order defines verb ids.
constexpr VerbSpec kVerbSpecs[] = {
    // Posture.
    {"stand", Category::kPosture, kAny, false},
    {"bend", Category::kPosture, kAny, false},
    {"sit", Category::kPosture, kAny, false},
    {"crouch", Category::kPosture, kAny, false},
    {"lay", Category::kPosture, kAny, false},
    {"other", Category::kPosture, kAny, false},
    {"undetermined posture", Category::kPosture, kAny, false},
    // Motion.
    {"still", Category::kMotion, kAny, false},
    {"walk", Category::kMotion, kAny, false},
    {"run", Category::kMotion, kAny, false},
    {"ride", Category::kMotion, kAny, false},
    {"board", Category::kMotion, kAny, false},
    {"crawl", Category::kMotion, kAny, false},
    {"jump or fall", Category::kMotion, kAny, false},
    {"dance", Category::kMotion, kAny, false},
    {"swim", Category::kMotion, kAny, false},
    {"climb", Category::kMotion, kAny, false},
    {"undetermined motion", Category::kMotion, kAny, false},
    // Interactions with objects.
    {"hold", Category::kObjectInteraction, kObject, false},
    {"lift", Category::kObjectInteraction, kObject, false},
    {"carry without hands", Category::kObjectInteraction, kObject, false},
    {"pull or push softly", Category::kObjectInteraction, kObject, false},
    {"manipulate", Category::kObjectInteraction, kObject, false},
    {"point", Category::kObjectInteraction, kObject, true},
    {"use on", Category::kObjectInteraction, kObject, true},
    {"eat", Category::kObjectInteraction, kObject, true},
    {"drink", Category::kObjectInteraction, kObject, true},
    {"watch", Category::kObjectInteraction, kObject, false},
    {"talk on phone", Category::kObjectInteraction, kObject, false},
    {"smoke", Category::kObjectInteraction, kObject, false},
    // Social interactions.
    {"hug", Category::kSocial, kPerson, false},
    {"kiss", Category::kSocial, kPerson, false},
    {"handshake", Category::kSocial, kPerson, false},
    {"wave", Category::kSocial, kPerson, false},
    {"highfive", Category::kSocial, kPerson, false},
    {"fistbump", Category::kSocial, kPerson, false},
    {"thumbsup", Category::kSocial, kPerson, false},
    {"pat", Category::kSocial, kPerson, false},
    {"hold somebody", Category::kSocial, kPerson, false},
    {"pull or push somebody softly", Category::kSocial, kPerson, false},
    {"carry somebody", Category::kSocial, kPerson, false},
    {"point somebody", Category::kSocial, kPerson, true},
    {"act on somebody", Category::kSocial, kPerson, true},
    // Violent interactions.
    {"punch", Category::kViolent, kAny, false},
    {"kick", Category::kViolent, kAny, false},
    {"choke", Category::kViolent, kAny, false},
    {"block", Category::kViolent, kAny, false},
    {"pull or push strongly", Category::kViolent, kAny, false},
    {"throw", Category::kViolent, kAny, false},
    {"catch", Category::kViolent, kAny, false},
    {"hit", Category::kViolent, kAny, true},
};

static_assert(std::size(kVerbSpecs) == kNumVerbs);

std::vector<Verb> BuildBuiltinVerbs() {
  std::vector<Verb> verbs;
  verbs.reserve(std::size(kVerbSpecs));
  for (const VerbSpec& spec : kVerbSpecs) {
    Verb verb;
    verb.id = static_cast<int>(verbs.size());
    verb.name = spec.name;
    verb.category = spec.category;
    verb.target_rule = TargetRule{spec.kind, spec.instrument};
    verbs.push_back(std::move(verb));
  }
  return verbs;
}

}  // namespace

std::string_view CategoryName(Category category) {
  switch (category) {
    case Category::kPosture:
      return "Posture";
    case Category::kMotion:
      return "Motion";
    case Category::kObjectInteraction:
      return "ObjectInteraction";
    case Category::kSocial:
      return "Social";
    case Category::kViolent:
      return "Violent";
  }
  return "?";
}

std::string_view TargetKindName(TargetKind kind) {
  switch (kind) {
    case TargetKind::kNone:
      return "None";
    case TargetKind::kObjectOnly:
      return "ObjectOnly";
    case TargetKind::kPersonOnly:
      return "PersonOnly";
    case TargetKind::kObjectOrPerson:
      return "ObjectOrPerson";
  }
  return "?";
}

bool TargetRule::Accepts(bool target_is_person) const {
  switch (kind) {
    case TargetKind::kNone:
      return false;
    case TargetKind::kObjectOnly:
      return !target_is_person;
    case TargetKind::kPersonOnly:
      return target_is_person;
    case TargetKind::kObjectOrPerson:
      return true;
  }
  return false;
}

Taxonomy::Taxonomy(std::vector<Verb> verbs) : verbs_(std::move(verbs)) {
  for (std::size_t i = 0; i < verbs_.size(); ++i) {
    Verb& verb = verbs_[i];
    if (verb.id != static_cast<int>(i)) {
      throw StructuralError("taxonomy: verb ids must be dense, got id " +
                            std::to_string(verb.id) + " at position " +
                            std::to_string(i));
    }
    if (!by_name_.emplace(verb.name, verb.id).second) {
      throw StructuralError("taxonomy: duplicate verb name '" + verb.name +
                            "'");
    }
    by_category_[static_cast<std::size_t>(verb.category)].push_back(verb.id);
  }
}

const Verb& Taxonomy::at(int id) const {
  if (id < 0 || id >= static_cast<int>(verbs_.size())) {
    throw StructuralError("taxonomy: verb id out of range: " +
                          std::to_string(id));
  }
  return verbs_[static_cast<std::size_t>(id)];
}

const Verb* Taxonomy::Find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return nullptr;
  return &verbs_[static_cast<std::size_t>(it->second)];
}

const Verb& Taxonomy::Get(std::string_view name) const {
  const Verb* verb = Find(name);
  if (verb == nullptr) {
    throw StructuralError("unknown verb '" + std::string(name) + "'");
  }
  return *verb;
}

const Taxonomy& BuiltinTaxonomy() {
  static const Taxonomy* const kTaxonomy = new Taxonomy(BuildBuiltinVerbs());
  return *kTaxonomy;
}

std::string FormatTaxonomyTable(const Taxonomy& taxonomy) {
  std::size_t name_width = 4;
  for (const Verb& verb : taxonomy.verbs()) {
    name_width = std::max(name_width, verb.name.size());
  }
  std::ostringstream out;
  out << std::left << std::setw(4) << "id" << "  " << std::setw(name_width)
      << "verb" << "  " << std::setw(17) << "category" << "  " << std::setw(9)
      << "exclusive" << "  " << std::setw(9) << "mandatory" << "  "
      << std::setw(14) << "target" << "  " << "instrument\n";
  for (const Verb& verb : taxonomy.verbs()) {
    out << std::left << std::setw(4) << verb.id << "  "
        << std::setw(name_width) << verb.name << "  " << std::setw(17)
        << CategoryName(verb.category) << "  " << std::setw(9)
        << (verb.exclusive() ? "yes" : "no") << "  " << std::setw(9)
        << (verb.mandatory() ? "yes" : "no") << "  " << std::setw(14)
        << TargetKindName(verb.target_rule.kind) << "  "
        << (verb.target_rule.instrument_allowed ? "yes" : "no") << "\n";
  }
  return out.str();
}

}  // namespace h2o
