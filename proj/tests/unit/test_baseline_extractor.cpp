#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "test_support.hpp"
#include "voxrep/baseline.hpp"
#include "voxrep/error.hpp"
#include "voxrep/scene_synth.hpp"
#include "voxrep/voxg_io.hpp"

using namespace voxrep;

namespace {

const Rgb kRed{230, 25, 25};
const Rgb kBlue{0, 60, 220};

// Brute-force labeling: repeated relaxation of labels to the minimum over neighbors.
std::size_t brute_component_count(const VoxelGrid& g, int connectivity) {
  const auto& d = g.dims();
  std::vector<long> label(d.volume(), -1);
  for (std::size_t i = 0; i < label.size(); ++i)
    if (!g.cells()[i].is_black()) label[i] = static_cast<long>(i);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int z = 0; z < d.d; ++z)
      for (int y = 0; y < d.h; ++y)
        for (int x = 0; x < d.w; ++x) {
          const std::size_t i = g.index(x, y, z);
          if (label[i] < 0) continue;
          for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
              for (int dx = -1; dx <= 1; ++dx) {
                const int manhattan = std::abs(dx) + std::abs(dy) + std::abs(dz);
                if (manhattan == 0 || (connectivity == 6 && manhattan > 1)) continue;
                if (!d.contains(x + dx, y + dy, z + dz)) continue;
                const std::size_t j = g.index(x + dx, y + dy, z + dz);
                if (label[j] >= 0 && label[j] < label[i]) {
                  label[i] = label[j];
                  changed = true;
                }
              }
        }
  }
  std::set<long> roots;
  for (long l : label)
    if (l >= 0) roots.insert(l);
  return roots.size();
}

}  // namespace

TEST_SUITE("baseline_extractor") {
  TEST_CASE("connected components examples") {
    CHECK(connected_components(new_grid({})).empty());

    VoxelGrid block = new_grid({});
    test::fill_box(block, {4, 4, 0}, {3, 3, 3}, kRed);
    const auto one = connected_components(block);
    REQUIRE(one.size() == 1);
    CHECK(one[0].voxels.size() == 27);
    CHECK(one[0].colors.size() == 27);

    VoxelGrid two = new_grid({});
    test::fill_box(two, {0, 0, 0}, {3, 3, 3}, kRed);
    test::fill_box(two, {5, 5, 5}, {2, 2, 2}, kBlue);
    CHECK(connected_components(two, Connectivity::Six).size() == 2);
    CHECK(connected_components(two, Connectivity::TwentySix).size() == 2);

    VoxelGrid diagonal = new_grid({});
    diagonal.set(1, 1, 1, kRed);
    diagonal.set(2, 2, 2, kRed);
    CHECK(connected_components(diagonal, Connectivity::Six).size() == 2);
    CHECK(connected_components(diagonal, Connectivity::TwentySix).size() == 1);
  }

  TEST_CASE("components partition the occupied set and match brute force") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      const VoxelGrid g = test::random_grid(seed, {12, 10, 6}, 0.25);
      for (const auto conn : {Connectivity::Six, Connectivity::TwentySix}) {
        const auto comps = connected_components(g, conn);
        CHECK(comps.size() == brute_component_count(g, static_cast<int>(conn)));
        std::set<Coord> seen;
        std::size_t total = 0;
        Coord prev_first{-1, -1, -1};
        for (const auto& c : comps) {
          REQUIRE_FALSE(c.voxels.empty());
          CHECK(prev_first < c.voxels.front());
          prev_first = c.voxels.front();
          for (std::size_t k = 0; k < c.voxels.size(); ++k) {
            const Coord& v = c.voxels[k];
            CHECK(g.get(v.x, v.y, v.z) == c.colors[k]);
            seen.insert(v);
          }
          total += c.voxels.size();
        }
        CHECK(total == occupied_count(g));
        CHECK(seen.size() == total);
      }
    }
  }

  TEST_CASE("extract_semantics on a red corner block") {
    VoxelGrid g = new_grid({});
    test::fill_box(g, {0, 0, 0}, {3, 3, 3}, kRed);
    const SceneAnnotation a = extract_semantics(g);
    REQUIRE(a.objects.size() == 1);
    CHECK(a.objects[0].id == "0");
    CHECK(a.objects[0].number_of_occupied_voxel == 27);
    CHECK(a.objects[0].voxel_coords_center == Coord{1, 1, 1});
    CHECK(a.objects[0].color == "red");
    CHECK(a.objects[0].description == "unknown");
    CHECK(extract_semantics(new_grid({})).objects.empty());
  }

  TEST_CASE("modal color with nearest-palette mapping") {
    VoxelGrid g = new_grid({});
    test::fill_box(g, {0, 0, 0}, {2, 2, 1}, {250, 20, 20});
    g.set(2, 0, 0, kBlue);
    CHECK(extract_semantics(g).objects[0].color == "red");
  }

  TEST_CASE("shape features") {
    std::vector<Coord> box;
    for (int z = 0; z < 2; ++z)
      for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 8; ++x) box.push_back({x, y, z});
    const ShapeFeatures f = shape_features(box);
    CHECK(f[0] == doctest::Approx(0.5));
    CHECK(f[1] == doctest::Approx(0.25));
    CHECK(f[2] == doctest::Approx(1.0));
    CHECK(f[3] == doctest::Approx(std::log(64.0)));
  }

  TEST_CASE("fit_shape_stats and nearest-centroid classification") {
    test::TempDir dir;
    std::vector<ManifestEntry> entries;
    for (int i = 0; i < 3; ++i) {
      VoxelGrid g = new_grid({});
      test::fill_box(g, {10, 10, 0}, {5 + i, 5 + i, 5 + i}, kRed);
      test::fill_box(g, {40, 40, 0}, {20, 2, 2}, kBlue);
      const std::string name = "s" + std::to_string(i);
      write_voxg(dir / (name + ".voxg"), g);
      const long long cube = (5 + i) * (5 + i) * (5 + i);
      entries.push_back({name, name + ".voxg", name + ".png",
                         {name, {}, {{"0", "red", "cube", cube, {12, 12, 2}}, {"1", "blue", "rod", 80, {49, 40, 0}}}}});
    }
    write_manifest(dir / "m.jsonl", entries);
    const ShapeStatsModel model = fit_shape_stats(read_manifest(dir / "m.jsonl"));
    REQUIRE(model.centroids.size() == 2);
    CHECK(model.centroids.at("cube")[2] == doctest::Approx(1.0));
    CHECK(model.centroids.at("cube")[0] == doctest::Approx(1.0));
    CHECK(model.sample_counts.at("rod") == 3);

    save_shape_model(dir / "shape.json", model);
    const ShapeStatsModel loaded = load_shape_model(dir / "shape.json");
    CHECK(loaded.centroids == model.centroids);

    VoxelGrid probe = new_grid({});
    test::fill_box(probe, {0, 0, 0}, {6, 6, 6}, kRed);
    test::fill_box(probe, {50, 50, 0}, {18, 2, 2}, kBlue);
    const SceneAnnotation a = extract_semantics(probe, default_palette(), &loaded);
    REQUIRE(a.objects.size() == 2);
    CHECK(a.objects[0].description == "cube");
    CHECK(a.objects[1].description == "rod");

    ShapeStatsModel twins;
    twins.centroids = {{"zeta", {1, 1, 1, 1}}, {"alpha", {1, 1, 1, 1}}};
    CHECK(twins.classify({0.5, 0.5, 0.5, 0.5}) == "alpha");

    DatasetManifest empty;
    CHECK_THROWS_AS(fit_shape_stats(empty), Error);
  }

  TEST_CASE("recovers synthetic scenes exactly") {
    SceneSpec spec;
    spec.master_seed = 77;
    const MeshLibrary lib = builtin_mesh_library();
    for (std::size_t i = 0; i < 20; ++i) {
      const SynthScene s = synth_scene(spec, i, lib);
      const SceneAnnotation a = extract_semantics(s.grid);
      REQUIRE(a.objects.size() == s.annotation.objects.size());
      long long total = 0;
      for (const auto& o : a.objects) total += o.number_of_occupied_voxel;
      CHECK(static_cast<std::size_t>(total) == occupied_count(s.grid));
      for (const auto& truth : s.annotation.objects) {
        const auto it = std::find_if(a.objects.begin(), a.objects.end(),
                                     [&](const ObjectRecord& o) { return o.color == truth.color; });
        REQUIRE(it != a.objects.end());
        CHECK(it->voxel_coords_center == truth.voxel_coords_center);
        CHECK(it->number_of_occupied_voxel == truth.number_of_occupied_voxel);
      }
      CHECK(extract_semantics(s.grid).objects == a.objects);
    }
  }
}
