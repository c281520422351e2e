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
#include <benchmark/benchmark.h>

#include <random>

#include "h2o/decoder.h"
#include "h2o/evaluator.h"
#include "h2o/geometry.h"
#include "h2o/synthgen.h"

namespace h2o {
namespace {

// 50 persons and 50 cups on a 512x512 image; the first `n` persons each act
// on one cup.
RenderedScene BenchScene(int n) {
  const AnchorGrid grid = BuildAnchorGrid(512, 512, AnchorGridConfig{});
  const std::vector<AnchorRef> refs = PlaceOnAnchors(grid, 100, 0.3, 7, 11000);
  Scene scene;
  scene.image_id = 1;
  scene.width = 512;
  scene.height = 512;
  for (int k = 0; k < 100; ++k) {
    scene.instances.push_back(
        Instance{k + 1, 1,
                 grid.boxes[static_cast<std::size_t>(
                     grid.shape.FlatIndex(refs[static_cast<std::size_t>(k)]))],
                 k < 50 ? "person" : "cup"});
  }
  for (int i = 0; i < n; ++i) {
    scene.interactions.push_back({i + 1, "hold", 51 + i, std::nullopt});
  }
  return RenderPerfectBundle(scene, grid);
}

void BM_Decode(benchmark::State& state) {
  const RenderedScene rendered = BenchScene(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Decode(rendered.bundle, rendered.detections, BuiltinTaxonomy()));
  }
}
BENCHMARK(BM_Decode)->Arg(1)->Arg(10)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_Nms(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> coord(0.0, 500.0);
  std::uniform_real_distribution<double> side(5.0, 80.0);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::vector<Detection> dets(static_cast<std::size_t>(state.range(0)));
  for (Detection& d : dets) {
    d.bbox = BBox{coord(rng), coord(rng), side(rng), side(rng)};
    d.class_name = rng() % 2 == 0 ? "person" : "cup";
    d.score = score(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(Nms(dets, 0.5));
}
BENCHMARK(BM_Nms)->Arg(50)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_Evaluate(benchmark::State& state) {
  const SynthConfig config;
  const std::vector<Scene> gt = GenerateDataset(config, 1, 200);
  std::vector<PredictedTriplet> preds;
  for (const Scene& scene : gt) {
    const AnchorGrid grid =
        BuildAnchorGrid(scene.width, scene.height, config.grid);
    const RenderedScene rendered = RenderPerfectBundle(scene, grid);
    const std::vector<PredictedTriplet> out =
        Decode(Perturb(rendered.bundle, NoiseConfig{0.2, 0.2, 0.0},
                       static_cast<std::uint64_t>(scene.image_id)),
               rendered.detections, BuiltinTaxonomy());
    preds.insert(preds.end(), out.begin(), out.end());
  }
  const EvalScenario scenario;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Evaluate(gt, preds, scenario));
  }
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace h2o

BENCHMARK_MAIN();
