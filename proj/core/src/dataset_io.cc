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

#include "h2o/dataset_io.h"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "h2o/errors.h"
#include "json.hpp"

namespace h2o {

namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw StructuralError(where + ": " + what);
}

json ParseJson(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw StructuralError("malformed " + std::string(what) + " document: " +
                          e.what());
  }
}

const json& Field(const json& object, const char* key,
                  const std::string& where) {
  if (!object.is_object()) Fail(where, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) Fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::int64_t AsInt(const json& value, const std::string& where) {
  if (!value.is_number_integer()) Fail(where, "expected an integer");
  return value.get<std::int64_t>();
}

double AsNumber(const json& value, const std::string& where) {
  if (!value.is_number()) Fail(where, "expected a number");
  return value.get<double>();
}

std::string AsString(const json& value, const std::string& where) {
  if (!value.is_string()) Fail(where, "expected a string");
  return value.get<std::string>();
}

BBox AsBox(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 4) {
    Fail(where, "expected a box [x, y, w, h]");
  }
  BBox box{AsNumber(value[0], where + "/0"), AsNumber(value[1], where + "/1"),
           AsNumber(value[2], where + "/2"), AsNumber(value[3], where + "/3")};
  if (!box.IsValid()) Fail(where, "box must be finite with w > 0 and h > 0");
  return box;
}

std::optional<std::int64_t> OptionalInt(const json& object, const char* key,
                                        const std::string& where) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return std::nullopt;
  return AsInt(*it, where + "/" + key);
}

const json& OptionalArray(const json& doc, const char* key) {
  static const json kEmpty = json::array();
  auto it = doc.find(key);
  if (it == doc.end()) return kEmpty;
  if (!it->is_array()) Fail(std::string("/") + key, "expected an array");
  return *it;
}

json BoxJson(const BBox& box) { return json::array({box.x, box.y, box.w, box.h}); }

}  // namespace

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return buffer.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

std::vector<Scene> ParseDataset(std::string_view text,
                                const ReadOptions& options) {
  const json doc = ParseJson(text, "dataset");
  if (!doc.is_object()) Fail("/", "dataset document must be an object");

  std::vector<Scene> scenes;
  std::unordered_map<ImageId, std::size_t> scene_index;
  const json& images = OptionalArray(doc, "images");
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = "/images/" + std::to_string(i);
    const json& image = images[i];
    Scene scene;
    scene.image_id = AsInt(Field(image, "id", where), where + "/id");
    scene.width =
        static_cast<int>(AsInt(Field(image, "width", where), where + "/width"));
    scene.height = static_cast<int>(
        AsInt(Field(image, "height", where), where + "/height"));
    if (scene.width <= 0 || scene.height <= 0) {
      Fail(where, "image size must be positive");
    }
    if (auto it = image.find("file_name"); it != image.end()) {
      scene.file_name = AsString(*it, where + "/file_name");
    }
    if (!scene_index.emplace(scene.image_id, scenes.size()).second) {
      Fail(where + "/id", "duplicate image id " + std::to_string(scene.image_id));
    }
    scenes.push_back(std::move(scene));
  }

  // instance id -> scene index
  std::unordered_map<InstanceId, std::size_t> instance_scene;
  const json& instances = OptionalArray(doc, "instances");
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const std::string where = "/instances/" + std::to_string(i);
    const json& record = instances[i];
    Instance instance;
    instance.id = AsInt(Field(record, "id", where), where + "/id");
    instance.image_id =
        AsInt(Field(record, "image_id", where), where + "/image_id");
    instance.class_name =
        AsString(Field(record, "class", where), where + "/class");
    if (!options.registry->Accepts(instance.class_name)) {
      if (!options.map_unknown_to_other) {
        Fail(where + "/class", "unknown class '" + instance.class_name + "'");
      }
      instance.class_name = std::string(kOtherClass);
    }
    auto scene_it = scene_index.find(instance.image_id);
    if (scene_it == scene_index.end()) {
      Fail(where + "/image_id",
           "dangling image id " + std::to_string(instance.image_id));
    }
    Scene& scene = scenes[scene_it->second];
    const BBox raw = AsBox(Field(record, "bbox", where), where + "/bbox");
    instance.bbox = ClampToImage(raw, scene.width, scene.height);
    if (!instance.bbox.IsValid()) {
      Fail(where + "/bbox", "box lies outside its image");
    }
    if (!instance_scene.emplace(instance.id, scene_it->second).second) {
      Fail(where + "/id",
           "duplicate instance id " + std::to_string(instance.id));
    }
    scene.instances.push_back(std::move(instance));
  }

  const json& interactions = OptionalArray(doc, "interactions");
  for (std::size_t i = 0; i < interactions.size(); ++i) {
    const std::string where = "/interactions/" + std::to_string(i);
    const json& record = interactions[i];
    InteractionAnnotation ann;
    ann.subject_id = AsInt(Field(record, "subject", where), where + "/subject");
    ann.verb = AsString(Field(record, "verb", where), where + "/verb");
    if (options.taxonomy->Find(ann.verb) == nullptr) {
      Fail(where + "/verb", "unknown verb '" + ann.verb + "'");
    }
    ann.target_id = OptionalInt(record, "target", where);
    ann.instrument_id = OptionalInt(record, "instrument", where);

    auto subject_it = instance_scene.find(ann.subject_id);
    if (subject_it == instance_scene.end()) {
      Fail(where + "/subject",
           "dangling instance id " + std::to_string(ann.subject_id));
    }
    const std::size_t scene_pos = subject_it->second;
    for (const auto& [key, id] : {std::pair{"target", ann.target_id},
                                  std::pair{"instrument", ann.instrument_id}}) {
      if (!id) continue;
      auto it = instance_scene.find(*id);
      if (it == instance_scene.end()) {
        Fail(where + "/" + key, "dangling instance id " + std::to_string(*id));
      }
      if (it->second != scene_pos) {
        Fail(where + "/" + key, "instance " + std::to_string(*id) +
                                    " belongs to a different image");
      }
    }
    scenes[scene_pos].interactions.push_back(std::move(ann));
  }
  return scenes;
}

std::vector<Scene> ReadDataset(const std::filesystem::path& path,
                               const ReadOptions& options) {
  const std::string text = ReadTextFile(path);
  try {
    return ParseDataset(text, options);
  } catch (const StructuralError& e) {
    throw StructuralError(path.string() + ":" + e.what());
  }
}

std::string SerializeDataset(const std::vector<Scene>& scenes) {
  json images = json::array();
  json instances = json::array();
  json interactions = json::array();
  for (const Scene& scene : scenes) {
    images.push_back({{"id", scene.image_id},
                      {"width", scene.width},
                      {"height", scene.height},
                      {"file_name", scene.file_name}});
    for (const Instance& instance : scene.instances) {
      instances.push_back({{"id", instance.id},
                           {"image_id", instance.image_id},
                           {"bbox", BoxJson(instance.bbox)},
                           {"class", instance.class_name}});
    }
    for (const InteractionAnnotation& ann : scene.interactions) {
      json record = {{"subject", ann.subject_id}, {"verb", ann.verb}};
      if (ann.target_id) record["target"] = *ann.target_id;
      if (ann.instrument_id) record["instrument"] = *ann.instrument_id;
      interactions.push_back(std::move(record));
    }
  }
  json doc = {{"images", std::move(images)},
              {"instances", std::move(instances)},
              {"interactions", std::move(interactions)}};
  return doc.dump(1) + "\n";
}

void WriteDataset(const std::vector<Scene>& scenes,
                  const std::filesystem::path& path) {
  WriteTextFile(path, SerializeDataset(scenes));
}

std::vector<PredictedTriplet> ParsePredictions(std::string_view text,
                                               const Taxonomy& taxonomy) {
  const json doc = ParseJson(text, "prediction");
  if (!doc.is_array()) Fail("/", "prediction document must be an array");
  std::vector<PredictedTriplet> preds;
  preds.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = "/" + std::to_string(i);
    const json& record = doc[i];
    PredictedTriplet pred;
    pred.image_id = AsInt(Field(record, "image_id", where), where + "/image_id");
    pred.subject_box =
        AsBox(Field(record, "subject", where), where + "/subject");
    pred.verb = AsString(Field(record, "verb", where), where + "/verb");
    if (taxonomy.Find(pred.verb) == nullptr) {
      Fail(where + "/verb", "unknown verb '" + pred.verb + "'");
    }
    if (auto it = record.find("target"); it != record.end() && !it->is_null()) {
      pred.target_box = AsBox(*it, where + "/target");
    }
    if (auto it = record.find("target_class");
        it != record.end() && !it->is_null()) {
      pred.target_class = AsString(*it, where + "/target_class");
    }
    if (auto it = record.find("instrument");
        it != record.end() && !it->is_null()) {
      pred.instrument_box = AsBox(*it, where + "/instrument");
    }
    pred.score = AsNumber(Field(record, "score", where), where + "/score");
    if (!(pred.score >= 0.0 && pred.score <= 1.0)) {
      Fail(where + "/score", "score must lie in [0, 1]");
    }
    preds.push_back(std::move(pred));
  }
  return preds;
}

std::vector<PredictedTriplet> ReadPredictions(const std::filesystem::path& path,
                                              const Taxonomy& taxonomy) {
  const std::string text = ReadTextFile(path);
  try {
    return ParsePredictions(text, taxonomy);
  } catch (const StructuralError& e) {
    throw StructuralError(path.string() + ":" + e.what());
  }
}

std::string SerializePredictions(const std::vector<PredictedTriplet>& preds) {
  json doc = json::array();
  for (const PredictedTriplet& pred : preds) {
    doc.push_back(
        {{"image_id", pred.image_id},
         {"subject", BoxJson(pred.subject_box)},
         {"verb", pred.verb},
         {"target", pred.target_box ? BoxJson(*pred.target_box) : json()},
         {"target_class", pred.target_class ? json(*pred.target_class) : json()},
         {"instrument",
          pred.instrument_box ? BoxJson(*pred.instrument_box) : json()},
         {"score", pred.score}});
  }
  return doc.dump(1) + "\n";
}

void WritePredictions(const std::vector<PredictedTriplet>& preds,
                      const std::filesystem::path& path) {
  WriteTextFile(path, SerializePredictions(preds));
}

void MapRareClassesToOther(std::vector<Scene>& scenes,
                           const ClassRegistry& registry) {
  for (Scene& scene : scenes) {
    for (Instance& instance : scene.instances) {
      if (!registry.Contains(instance.class_name)) {
        instance.class_name = std::string(kOtherClass);
      }
    }
  }
}

}  // namespace h2o
