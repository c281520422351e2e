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

#include "cli.h"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "h2o/bundle.h"
#include "h2o/dataset_io.h"
#include "h2o/decode_bench.h"
#include "h2o/decoder.h"
#include "h2o/errors.h"
#include "h2o/evaluator.h"
#include "h2o/parallel.h"
#include "h2o/stats.h"
#include "h2o/synthgen.h"
#include "h2o/taxonomy.h"
#include "h2o/validate.h"

namespace h2o {

namespace {

namespace fs = std::filesystem;

constexpr const char* kBundleExtension = ".h2odm";

ReadOptions DatasetOptions(bool map_other) {
  ReadOptions options;
  options.map_unknown_to_other = map_other;
  return options;
}

// Expands directories to their bundle files, sorted by path.
std::vector<fs::path> ExpandBundlePaths(const std::vector<std::string>& inputs) {
  std::vector<fs::path> paths;
  for (const std::string& input : inputs) {
    if (fs::is_directory(input)) {
      std::vector<fs::path> found;
      for (const fs::directory_entry& entry : fs::directory_iterator(input)) {
        if (entry.path().extension() == kBundleExtension) {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      paths.insert(paths.end(), found.begin(), found.end());
    } else {
      paths.emplace_back(input);
    }
  }
  return paths;
}

int RunValidate(const std::string& dataset, bool map_other, std::ostream& out) {
  const std::vector<Scene> scenes =
      ReadDataset(dataset, DatasetOptions(map_other));
  std::size_t count = 0;
  for (const Scene& scene : scenes) {
    for (const Violation& v : ValidateScene(scene, BuiltinTaxonomy())) {
      out << "image " << scene.image_id << ": " << FormatViolation(v) << "\n";
      ++count;
    }
  }
  out << count << (count == 1 ? " violation" : " violations") << "\n";
  return count == 0 ? kExitOk : kExitViolations;
}

int RunStats(const std::string& dataset, bool map_other, std::ostream& out) {
  const std::vector<Scene> scenes =
      ReadDataset(dataset, DatasetOptions(map_other));
  out << StatsToJson(ComputeStats(scenes, BuiltinTaxonomy()));
  return kExitOk;
}

int RunDecode(const std::vector<std::string>& bundle_inputs,
              const std::string& detections_path, const std::string& output,
              const DecodeConfig& config, int jobs, std::ostream& out) {
  const std::vector<fs::path> paths = ExpandBundlePaths(bundle_inputs);
  std::map<ImageId, std::vector<Detection>> detections;
  for (Detection& det : ReadDetections(detections_path)) {
    detections[det.image_id].push_back(std::move(det));
  }
  std::vector<std::vector<PredictedTriplet>> per_image(paths.size());
  ParallelFor(paths.size(), jobs, [&](std::size_t i) {
    const DenseMapBundle bundle = ReadBundle(paths[i]);
    auto it = detections.find(bundle.image_id());
    if (it == detections.end()) return;
    per_image[i] = Decode(bundle, it->second, BuiltinTaxonomy(), config);
  });
  std::vector<PredictedTriplet> all;
  for (std::vector<PredictedTriplet>& triplets : per_image) {
    all.insert(all.end(), triplets.begin(), triplets.end());
  }
  WritePredictions(all, output);
  out << "decoded " << paths.size() << " bundles, " << all.size()
      << " triplets -> " << output << "\n";
  return kExitOk;
}

int RunEval(const std::string& gt_path, const std::string& preds_path,
            const EvalScenario& scenario, bool map_other, int jobs,
            const std::string& report_path, std::ostream& out) {
  const std::vector<Scene> gt = ReadDataset(gt_path, DatasetOptions(map_other));
  const std::vector<PredictedTriplet> preds = ReadPredictions(preds_path);
  const EvalReport report = Evaluate(gt, preds, scenario, BuiltinTaxonomy(),
                                     ClassRegistry::Coco(), jobs);
  if (!report_path.empty()) WriteTextFile(report_path, ReportToJson(report));
  out << FormatReportTable(report);
  return kExitOk;
}

struct SynthArgs {
  std::string out_dir;
  std::uint64_t first_seed = 1;
  int count = 10;
  std::vector<int> persons = {1, 4};
  std::vector<int> objects = {0, 4};
  NoiseConfig noise;
  std::uint64_t noise_seed = 0;
};

int RunSynth(const SynthArgs& args, std::ostream& out) {
  SynthConfig config;
  config.min_persons = args.persons.at(0);
  config.max_persons = args.persons.at(1);
  config.min_objects = args.objects.at(0);
  config.max_objects = args.objects.at(1);
  const std::vector<Scene> scenes =
      GenerateDataset(config, args.first_seed, args.count);

  const fs::path root(args.out_dir);
  fs::create_directories(root / "bundles");
  WriteDataset(scenes, root / "dataset.json");
  std::vector<Detection> detections;
  for (const Scene& scene : scenes) {
    const AnchorGrid grid =
        BuildAnchorGrid(scene.width, scene.height, config.grid);
    RenderedScene rendered = RenderPerfectBundle(
        scene, grid, BuiltinTaxonomy(), config.embedding_dim, config.margin);
    const std::uint64_t seed =
        args.noise_seed + static_cast<std::uint64_t>(scene.image_id);
    const DenseMapBundle bundle = Perturb(rendered.bundle, args.noise, seed);
    WriteBundle(bundle, root / "bundles" /
                            (std::to_string(scene.image_id) + kBundleExtension));
    std::vector<Detection> dets =
        PerturbDetections(std::move(rendered.detections), args.noise.sigma_box,
                          seed);
    detections.insert(detections.end(), dets.begin(), dets.end());
  }
  WriteDetections(detections, root / "detections.json");
  out << "wrote " << scenes.size() << " scenes to " << root.string() << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Human-to-object interaction toolkit", "h2o"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "h2o 0.1.0");

  int jobs = DefaultJobs();
  bool map_other = false;

  CLI::App* taxonomy = app.add_subcommand("taxonomy", "Print the verb table");

  std::string dataset;
  CLI::App* validate =
      app.add_subcommand("validate", "Check a dataset against the rules");
  validate->add_option("dataset", dataset, "Dataset document")->required();
  validate->add_flag("--map-other", map_other,
                     "Rename unknown object classes to 'other'");

  CLI::App* stats = app.add_subcommand("stats", "Dataset statistics as JSON");
  stats->add_option("dataset", dataset, "Dataset document")->required();
  stats->add_flag("--map-other", map_other,
                  "Rename unknown object classes to 'other'");

  std::vector<std::string> bundles;
  std::string detections_path;
  std::string output;
  DecodeConfig decode_config;
  CLI::App* decode =
      app.add_subcommand("decode", "Decode dense-map bundles into triplets");
  decode->add_option("bundles", bundles, "Bundle files or directories")
      ->required();
  decode->add_option("--detections", detections_path, "Detections document")
      ->required();
  decode->add_option("-o,--output", output, "Predictions document")->required();
  decode->add_option("--floor", decode_config.triplet_floor,
                     "Triplet score floor")
      ->check(CLI::Range(0.0, 1.0));
  decode->add_option("--topk", decode_config.per_category_topk,
                     "Triplets kept per category and image")
      ->check(CLI::NonNegativeNumber);
  decode->add_option("--jobs", jobs, "Images decoded in parallel")
      ->check(CLI::PositiveNumber);

  std::string gt_path;
  std::string preds_path;
  std::string report_path;
  std::string mode = "original";
  std::string role = "1";
  EvalScenario scenario;
  CLI::App* eval = app.add_subcommand("eval", "AP_agent and AP_role");
  eval->add_option("gt", gt_path, "Ground-truth dataset")->required();
  eval->add_option("predictions", preds_path, "Predictions document")
      ->required();
  eval->add_option("--mode", mode, "original or objectness")
      ->check(CLI::IsMember({"original", "objectness"}));
  eval->add_option("--role", role, "1 or 2")->check(CLI::IsMember({"1", "2"}));
  eval->add_option("--iou", scenario.iou_threshold, "Match IoU threshold")
      ->check(CLI::Range(0.0, 1.0));
  eval->add_option("--report", report_path, "Write the JSON report here");
  eval->add_option("--jobs", jobs, "Verbs evaluated in parallel")
      ->check(CLI::PositiveNumber);
  eval->add_flag("--map-other", map_other,
                 "Rename unknown object classes to 'other'");

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "Write synthetic scenes, perfect bundles and detections");
  synth->add_option("-o,--out-dir", synth_args.out_dir, "Output directory")
      ->required();
  synth->add_option("--first-seed", synth_args.first_seed, "First seed");
  synth->add_option("--count", synth_args.count, "Number of scenes")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--persons", synth_args.persons, "min,max persons")
      ->delimiter(',')
      ->expected(2);
  synth->add_option("--objects", synth_args.objects, "min,max objects")
      ->delimiter(',')
      ->expected(2);
  synth->add_option("--sigma-p", synth_args.noise.sigma_probability,
                    "Probability jitter")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--sigma-e", synth_args.noise.sigma_embedding,
                    "Embedding jitter")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--sigma-box", synth_args.noise.sigma_box,
                    "Box jitter in pixels")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--noise-seed", synth_args.noise_seed, "Noise seed offset");

  DecodeBenchConfig bench_config;
  CLI::App* bench = app.add_subcommand(
      "bench", "Decode time against the number of interactions");
  bench->add_option("--interactions", bench_config.interactions,
                    "Interaction counts, comma separated")
      ->delimiter(',');
  bench->add_option("--repetitions", bench_config.repetitions,
                    "Timed runs per count")
      ->check(CLI::PositiveNumber);
  bench->add_option("--persons", bench_config.persons, "Person detections");
  bench->add_option("--objects", bench_config.objects, "Object detections");
  bench->add_option("--seed", bench_config.seed, "Layout seed");
  bench->add_option("--floor", bench_config.decode.triplet_floor,
                    "Triplet score floor")
      ->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (taxonomy->parsed()) {
      out << FormatTaxonomyTable(BuiltinTaxonomy());
      return kExitOk;
    }
    if (validate->parsed()) return RunValidate(dataset, map_other, out);
    if (stats->parsed()) return RunStats(dataset, map_other, out);
    if (decode->parsed()) {
      return RunDecode(bundles, detections_path, output, decode_config, jobs,
                       out);
    }
    if (eval->parsed()) {
      scenario.mode = ParseEvalMode(mode);
      scenario.role = ParseRoleVariant(role);
      return RunEval(gt_path, preds_path, scenario, map_other, jobs,
                     report_path, out);
    }
    if (synth->parsed()) return RunSynth(synth_args, out);
    if (bench->parsed()) {
      out << FormatBenchTable(BenchDecode(bench_config));
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  err << app.help();
  return kExitError;
}

}  // namespace h2o
