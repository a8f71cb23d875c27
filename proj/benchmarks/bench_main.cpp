#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "voxrep/baseline.hpp"
#include "voxrep/image.hpp"
#include "voxrep/metrics.hpp"
#include "voxrep/scene_synth.hpp"
#include "voxrep/slice_codec.hpp"
#include "voxrep/voxelizer.hpp"

using namespace voxrep;

namespace {

VoxelGrid dense_scene(std::uint64_t seed) {
  static const MeshLibrary lib = builtin_mesh_library();
  SceneSpec spec;
  spec.master_seed = seed;
  spec.objects_min = spec.objects_max = 5;
  return synth_scene(spec, 0, lib).grid;
}

void BM_Encode(benchmark::State& state) {
  const VoxelGrid g = dense_scene(1);
  EncodeOptions o;
  o.upscale_mode = static_cast<UpscaleMode>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(encode(g, o));
}
BENCHMARK(BM_Encode)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Decode(benchmark::State& state) {
  const VoxelGrid g = dense_scene(1);
  const Raster img = encode(g);
  for (auto _ : state) benchmark::DoNotOptimize(decode(img, g.dims()));
}
BENCHMARK(BM_Decode)->Unit(benchmark::kMillisecond);

void BM_PngRoundTrip(benchmark::State& state) {
  const Raster img = encode(dense_scene(2));
  for (auto _ : state) benchmark::DoNotOptimize(decode_png(encode_png(img)));
}
BENCHMARK(BM_PngRoundTrip)->Unit(benchmark::kMillisecond);

void BM_VoxelizeObject(benchmark::State& state) {
  const MeshLibrary lib = builtin_mesh_library();
  const TriangleMesh& mesh = lib.at("sofa")[0];
  const Placement p{0.7, static_cast<double>(state.range(0)), {50.0, 50.0, 8.0}};
  for (auto _ : state) benchmark::DoNotOptimize(voxelize_object(mesh, p, {}, {60, 180, 75}));
}
BENCHMARK(BM_VoxelizeObject)->Arg(10)->Arg(20)->Arg(35)->Unit(benchmark::kMicrosecond);

void BM_SynthScene(benchmark::State& state) {
  const MeshLibrary lib = builtin_mesh_library();
  SceneSpec spec;
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(synth_scene(spec, i++, lib));
}
BENCHMARK(BM_SynthScene)->Unit(benchmark::kMillisecond);

void BM_ExtractSemantics(benchmark::State& state) {
  const VoxelGrid g = dense_scene(3);
  for (auto _ : state) benchmark::DoNotOptimize(extract_semantics(g));
}
BENCHMARK(BM_ExtractSemantics)->Unit(benchmark::kMillisecond);

void BM_MatchObjects(benchmark::State& state) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> xy(0, 99), z(0, 15);
  std::vector<ObjectRecord> a, b;
  for (int i = 0; i < state.range(0); ++i) {
    a.push_back({std::to_string(i), "red", "cup", 10, {xy(rng), xy(rng), z(rng)}});
    b.push_back({std::to_string(i), "red", "cup", 10, {xy(rng), xy(rng), z(rng)}});
  }
  for (auto _ : state) benchmark::DoNotOptimize(match_objects(a, b));
}
BENCHMARK(BM_MatchObjects)->RangeMultiplier(4)->Range(4, 256);

}  // namespace

BENCHMARK_MAIN();
