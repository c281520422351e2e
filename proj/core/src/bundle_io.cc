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

#include <bit>
#include <cstring>

#include "h2o/bundle.h"
#include "h2o/dataset_io.h"
#include "h2o/errors.h"
#include "json.hpp"

namespace h2o {

namespace {

using nlohmann::json;

constexpr const char* kChannelOrder =
    "verb: active voice 0..V-1 then passive voice V..2V-1; presence: one per "
    "verb; embedding: T values";

std::uint32_t ByteSwap(std::uint32_t v) {
  return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) |
         (v >> 24);
}

void AppendFloats(std::string& out, std::span<const float> values) {
  const std::size_t start = out.size();
  out.resize(start + values.size() * sizeof(float));
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(values[i]);
    if constexpr (std::endian::native == std::endian::big) bits = ByteSwap(bits);
    std::memcpy(out.data() + start + i * sizeof(float), &bits, sizeof(bits));
  }
}

void ReadFloats(std::string_view bytes, std::size_t& offset,
                std::span<float> out) {
  const std::size_t needed = out.size() * sizeof(float);
  if (bytes.size() - offset < needed) {
    throw StructuralError("bundle: truncated plane data");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, bytes.data() + offset + i * sizeof(float), sizeof(bits));
    if constexpr (std::endian::native == std::endian::big) bits = ByteSwap(bits);
    out[i] = std::bit_cast<float>(bits);
  }
  offset += needed;
}

int MetaInt(const json& meta, const char* key) {
  auto it = meta.find(key);
  if (it == meta.end() || !it->is_number_integer()) {
    throw StructuralError(std::string("bundle metadata: missing integer '") +
                          key + "'");
  }
  return it->get<int>();
}

json BoxJson(const BBox& box) {
  return json::array({box.x, box.y, box.w, box.h});
}

}  // namespace

std::string SerializeBundle(const DenseMapBundle& bundle) {
  bundle.Validate();
  const GridShape& shape = bundle.shape();
  json levels = json::array();
  for (const LevelShape& level : shape.levels()) {
    levels.push_back(
        {{"stride", level.stride}, {"W", level.width}, {"H", level.height}});
  }
  const json meta = {{"V", bundle.num_verbs()},
                     {"T", bundle.embedding_dim()},
                     {"A", shape.anchors_per_cell()},
                     {"image_id", bundle.image_id()},
                     {"levels", std::move(levels)},
                     {"channel_order", kChannelOrder}};

  std::string out(kBundleMagic);
  out += '\n';
  out += meta.dump();
  out += '\n';
  for (int l = 0; l < static_cast<int>(shape.levels().size()); ++l) {
    const auto first = static_cast<std::size_t>(shape.level_offset(l));
    const auto count = static_cast<std::size_t>(shape.level_anchors(l));
    AppendFloats(out, bundle.verb().subspan(first * bundle.verb_channels(),
                                            count * bundle.verb_channels()));
    AppendFloats(out, bundle.presence().subspan(first * bundle.num_verbs(),
                                                count * bundle.num_verbs()));
    AppendFloats(out,
                 bundle.embedding().subspan(first * bundle.embedding_dim(),
                                            count * bundle.embedding_dim()));
  }
  return out;
}

DenseMapBundle ParseBundle(std::string_view bytes) {
  const std::size_t magic_end = bytes.find('\n');
  if (magic_end == std::string_view::npos ||
      bytes.substr(0, magic_end) != kBundleMagic) {
    throw StructuralError("bundle: missing H2ODM1 header");
  }
  const std::size_t meta_end = bytes.find('\n', magic_end + 1);
  if (meta_end == std::string_view::npos) {
    throw StructuralError("bundle: missing metadata line");
  }
  json meta;
  try {
    meta = json::parse(bytes.substr(magic_end + 1, meta_end - magic_end - 1));
  } catch (const json::parse_error& e) {
    throw StructuralError(std::string("bundle: malformed metadata: ") +
                          e.what());
  }
  if (!meta.is_object()) throw StructuralError("bundle: metadata not an object");

  std::vector<LevelShape> levels;
  auto levels_it = meta.find("levels");
  if (levels_it == meta.end() || !levels_it->is_array()) {
    throw StructuralError("bundle metadata: missing 'levels'");
  }
  for (const json& level : *levels_it) {
    levels.push_back(LevelShape{MetaInt(level, "stride"), MetaInt(level, "W"),
                                MetaInt(level, "H")});
  }
  DenseMapBundle bundle(GridShape(std::move(levels), MetaInt(meta, "A")),
                        MetaInt(meta, "V"), MetaInt(meta, "T"));
  if (auto it = meta.find("image_id"); it != meta.end() && it->is_number_integer()) {
    bundle.set_image_id(it->get<ImageId>());
  }

  const GridShape& shape = bundle.shape();
  std::size_t offset = meta_end + 1;
  for (int l = 0; l < static_cast<int>(shape.levels().size()); ++l) {
    const auto first = static_cast<std::size_t>(shape.level_offset(l));
    const auto count = static_cast<std::size_t>(shape.level_anchors(l));
    ReadFloats(bytes, offset,
               bundle.verb().subspan(first * bundle.verb_channels(),
                                     count * bundle.verb_channels()));
    ReadFloats(bytes, offset,
               bundle.presence().subspan(first * bundle.num_verbs(),
                                         count * bundle.num_verbs()));
    ReadFloats(bytes, offset,
               bundle.embedding().subspan(first * bundle.embedding_dim(),
                                          count * bundle.embedding_dim()));
  }
  if (offset != bytes.size()) {
    throw StructuralError("bundle: " + std::to_string(bytes.size() - offset) +
                          " trailing bytes after the last plane");
  }
  bundle.Validate();
  return bundle;
}

void WriteBundle(const DenseMapBundle& bundle,
                 const std::filesystem::path& path) {
  WriteTextFile(path, SerializeBundle(bundle));
}

DenseMapBundle ReadBundle(const std::filesystem::path& path) {
  const std::string bytes = ReadTextFile(path);
  try {
    return ParseBundle(bytes);
  } catch (const StructuralError& e) {
    throw StructuralError(path.string() + ": " + e.what());
  }
}

std::string SerializeDetections(const std::vector<Detection>& detections) {
  json doc = json::array();
  for (const Detection& det : detections) {
    json anchor;
    if (det.anchor_ref) {
      anchor = json::array({det.anchor_ref->level, det.anchor_ref->y,
                            det.anchor_ref->x, det.anchor_ref->anchor});
    }
    doc.push_back({{"image_id", det.image_id},
                   {"bbox", BoxJson(det.bbox)},
                   {"class", det.class_name},
                   {"score", det.score},
                   {"anchor_ref", std::move(anchor)}});
  }
  return doc.dump(1) + "\n";
}

std::vector<Detection> ParseDetections(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw StructuralError(std::string("malformed detections document: ") +
                          e.what());
  }
  if (!doc.is_array()) {
    throw StructuralError("detections document must be an array");
  }
  std::vector<Detection> detections;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = "/" + std::to_string(i);
    const json& record = doc[i];
    try {
      Detection det;
      det.image_id = record.value("image_id", ImageId{0});
      const json& box = record.at("bbox");
      if (!box.is_array() || box.size() != 4) {
        throw StructuralError("bbox must be [x, y, w, h]");
      }
      det.bbox = BBox{box[0].get<double>(), box[1].get<double>(),
                      box[2].get<double>(), box[3].get<double>()};
      if (!det.bbox.IsValid()) throw StructuralError("invalid bbox");
      det.class_name = record.at("class").get<std::string>();
      det.score = record.at("score").get<double>();
      if (!(det.score >= 0.0 && det.score <= 1.0)) {
        throw StructuralError("score must lie in [0, 1]");
      }
      if (auto it = record.find("anchor_ref");
          it != record.end() && !it->is_null()) {
        if (!it->is_array() || it->size() != 4) {
          throw StructuralError("anchor_ref must be [level, y, x, anchor]");
        }
        det.anchor_ref = AnchorRef{(*it)[0].get<int>(), (*it)[1].get<int>(),
                                   (*it)[2].get<int>(), (*it)[3].get<int>()};
      }
      detections.push_back(std::move(det));
    } catch (const json::exception& e) {
      throw StructuralError(where + ": " + e.what());
    } catch (const StructuralError& e) {
      throw StructuralError(where + ": " + e.what());
    }
  }
  return detections;
}

void WriteDetections(const std::vector<Detection>& detections,
                     const std::filesystem::path& path) {
  WriteTextFile(path, SerializeDetections(detections));
}

std::vector<Detection> ReadDetections(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  try {
    return ParseDetections(text);
  } catch (const StructuralError& e) {
    throw StructuralError(path.string() + ":" + e.what());
  }
}

}  // namespace h2o
