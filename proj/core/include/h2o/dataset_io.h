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

// Annotation and prediction documents.
//
// Ground truth is one JSON document per split:
//
//   {"images":       [{"id", "width", "height", "file_name"}],
//    "instances":    [{"id", "image_id", "bbox": [x, y, w, h], "class"}],
//    "interactions": [{"subject", "verb", "target"?, "instrument"?}]}
//
// Predictions are a flat JSON array of
//
//   {"image_id", "subject": [x, y, w, h], "verb", "target": [..] | null,
//    "target_class": str | null, "instrument": [..] | null, "score"}
//
// All boxes are absolute pixels with a top-left origin.

#ifndef H2O_DATASET_IO_H_
#define H2O_DATASET_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "h2o/taxonomy.h"
#include "h2o/types.h"

namespace h2o {

struct ReadOptions {
  // Class names accepted in addition to "other".
  const ClassRegistry* registry = &ClassRegistry::Coco();
  // Rename classes outside the registry to "other" instead of failing.
  bool map_unknown_to_other = false;
  const Taxonomy* taxonomy = &BuiltinTaxonomy();
};

// Parses a ground-truth document. Scenes come out in image order of the
// document, with instances and interactions in document order. Boxes are
// clamped to the image. Throws StructuralError with the JSON location of
// the offending field for malformed input, dangling ids, unknown verbs and
// unknown classes.
std::vector<Scene> ParseDataset(std::string_view text,
                                const ReadOptions& options = {});
std::vector<Scene> ReadDataset(const std::filesystem::path& path,
                               const ReadOptions& options = {});

std::string SerializeDataset(const std::vector<Scene>& scenes);
void WriteDataset(const std::vector<Scene>& scenes,
                  const std::filesystem::path& path);

std::vector<PredictedTriplet> ParsePredictions(
    std::string_view text, const Taxonomy& taxonomy = BuiltinTaxonomy());
std::vector<PredictedTriplet> ReadPredictions(
    const std::filesystem::path& path,
    const Taxonomy& taxonomy = BuiltinTaxonomy());

std::string SerializePredictions(const std::vector<PredictedTriplet>& preds);
void WritePredictions(const std::vector<PredictedTriplet>& preds,
                      const std::filesystem::path& path);

// Renames every class outside `registry` to "other".
void MapRareClassesToOther(std::vector<Scene>& scenes,
                           const ClassRegistry& registry);

// Whole-file helpers shared by the readers. Throw IoError.
std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace h2o

#endif  // H2O_DATASET_IO_H_
