#include "voxrep/scene_synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <thread>

#include "voxrep/error.hpp"
#include "voxrep/rng.hpp"
#include "voxrep/voxelizer.hpp"
#include "voxrep/voxg_io.hpp"

namespace voxrep {

namespace {

// Keeps the top/far vertex strictly inside the last cell.
constexpr double kEdgeMargin = 1e-6;

class ForbiddenMask {
 public:
  ForbiddenMask(const GridDims& dims, int radius) : dims_(dims), radius_(radius), cells_(dims.volume(), 0) {}

  bool blocked(const Coord& c) const { return cells_[offset(c.x, c.y, c.z)] != 0; }

  void claim(const std::vector<Coord>& voxels) {
    for (const Coord& c : voxels) {
      for (int z = std::max(0, c.z - radius_); z <= std::min(dims_.d - 1, c.z + radius_); ++z) {
        for (int y = std::max(0, c.y - radius_); y <= std::min(dims_.h - 1, c.y + radius_); ++y) {
          for (int x = std::max(0, c.x - radius_); x <= std::min(dims_.w - 1, c.x + radius_); ++x) {
            cells_[offset(x, y, z)] = 1;
          }
        }
      }
    }
  }

 private:
  std::size_t offset(int x, int y, int z) const {
    return (static_cast<std::size_t>(z) * dims_.h + y) * dims_.w + x;
  }

  GridDims dims_;
  int radius_;
  std::vector<char> cells_;
};

std::optional<std::vector<Coord>> try_place(const TriangleMesh& mesh, double yaw, double scale, Rng& rng,
                                            const SceneSpec& spec) {
  const GridDims& dims = spec.dims;
  TriangleMesh placed = place_mesh(mesh, {yaw, scale, {}});
  const Bounds3 b = mesh_bounds(placed);
  // Lowest vertex sits mid-way through layer 0, so the object is grounded.
  const double tz = 0.5 - b.min.z;
  const double tx_lo = -b.min.x, tx_hi = dims.w - kEdgeMargin - b.max.x;
  const double ty_lo = -b.min.y, ty_hi = dims.h - kEdgeMargin - b.max.y;
  // Always consume the two position draws so attempts stay aligned in the stream.
  const double ux = rng.uniform01(), uy = rng.uniform01();
  if (b.max.z + tz > dims.d - kEdgeMargin || tx_hi < tx_lo || ty_hi < ty_lo) return std::nullopt;
  const Vec3 t{tx_lo + (tx_hi - tx_lo) * ux, ty_lo + (ty_hi - ty_lo) * uy, tz};
  for (Vec3& v : placed.vertices) v = {v.x + t.x, v.y + t.y, v.z + t.z};
  return solid_fill(voxelize_placed_surface(placed, dims), dims);
}

}  // namespace

void SceneSpec::validate() const {
  dims.validate();
  if (categories.empty()) throw Error(ErrorKind::Config, "no categories");
  if (objects_min < 1 || objects_max < objects_min) throw Error(ErrorKind::Config, "need 1 <= objects_min <= objects_max");
  validate_palette(palette);
  if (static_cast<int>(palette.size()) < objects_max) {
    throw Error(ErrorKind::Config, "palette has " + std::to_string(palette.size()) + " colors but up to " +
                                       std::to_string(objects_max) + " objects need distinct colors");
  }
  if (!(scale_min > 0.0) || scale_max < scale_min) throw Error(ErrorKind::Config, "need 0 < scale_min <= scale_max");
  if (scale_max > std::min(dims.w, dims.h)) throw Error(ErrorKind::Config, "scale_max exceeds grid footprint");
  if (min_voxels < 1) throw Error(ErrorKind::Config, "min_voxels must be >= 1");
  if (clearance < 1) throw Error(ErrorKind::Config, "clearance must be >= 1");
  if (max_attempts < 1) throw Error(ErrorKind::Config, "max_attempts must be >= 1");
}

std::string scene_name(std::size_t scene_index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scene_%06zu", scene_index);
  return buf;
}

SynthScene synth_scene(const SceneSpec& spec, std::size_t scene_index, const MeshLibrary& library) {
  spec.validate();
  for (const auto& category : spec.categories) {
    auto it = library.find(category);
    if (it == library.end() || it->second.empty()) {
      throw Error(ErrorKind::Config, "mesh library has no meshes for category '" + category + "'");
    }
  }

  Rng rng(derive_seed(spec.master_seed, scene_index));
  SynthScene scene{VoxelGrid(spec.dims), {scene_name(scene_index), spec.dims, {}}, 0};
  const auto n_objects = static_cast<int>(rng.uniform_int(spec.objects_min, spec.objects_max));

  std::vector<std::size_t> color_order(spec.palette.size());
  for (std::size_t i = 0; i < color_order.size(); ++i) color_order[i] = i;
  for (std::size_t i = color_order.size(); i > 1; --i) {
    std::swap(color_order[i - 1], color_order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
  }

  ForbiddenMask forbidden(spec.dims, spec.clearance);
  for (int k = 0; k < n_objects; ++k) {
    const PaletteColor& color = spec.palette[color_order[static_cast<std::size_t>(k)]];
    bool placed = false;
    for (int attempt = 0; attempt < spec.max_attempts && !placed; ++attempt) {
      const std::string& category =
          spec.categories[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(spec.categories.size()) - 1))];
      const auto& meshes = library.at(category);
      const TriangleMesh& mesh = meshes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(meshes.size()) - 1))];
      const double yaw = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double scale = rng.uniform(spec.scale_min, spec.scale_max);

      auto voxels = try_place(mesh, yaw, scale, rng, spec);
      if (!voxels || static_cast<int>(voxels->size()) < spec.min_voxels) continue;
      if (std::any_of(voxels->begin(), voxels->end(), [&](const Coord& c) { return forbidden.blocked(c); })) continue;

      for (const Coord& c : *voxels) scene.grid.set(c.x, c.y, c.z, color.rgb);
      forbidden.claim(*voxels);
      scene.annotation.objects.push_back({std::to_string(scene.annotation.objects.size()), color.name, category,
                                          static_cast<long long>(voxels->size()), coords_center(*voxels)});
      placed = true;
    }
    if (!placed) ++scene.skipped_objects;
  }
  return scene;
}

DatasetManifest synth_dataset(const SceneSpec& spec, std::size_t n_scenes, const std::filesystem::path& output_dir,
                              const MeshLibrary& library, const DatasetOptions& options) {
  namespace fs = std::filesystem;
  spec.validate();
  options.encode.validate(spec.dims);
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + output_dir.string() + ": " + ec.message());

  std::vector<ManifestEntry> entries(n_scenes);
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  std::size_t failed_index = 0;

  const auto worker = [&] {
    for (std::size_t i = next++; i < n_scenes; i = next++) {
      try {
        SynthScene scene = synth_scene(spec, i, library);
        const std::string name = scene_name(i);
        write_voxg(output_dir / (name + ".voxg"), scene.grid);
        write_png(output_dir / (name + ".png"), encode(scene.grid, options.encode));
        entries[i] = {name, name + ".voxg", name + ".png", std::move(scene.annotation)};
        if (scene.skipped_objects > 0) {
          std::fprintf(stderr, "%s: skipped %d object(s) after %d attempts\n", name.c_str(), scene.skipped_objects,
                       spec.max_attempts);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure || i < failed_index) {
          failure = std::current_exception();
          failed_index = i;
        }
      }
    }
  };

  const int jobs = std::max(1, options.jobs);
  std::vector<std::thread> threads;
  for (int t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const Error& e) {
      throw Error(e.kind(), "scene " + std::to_string(failed_index) + ": " + e.detail());
    }
  }
  const fs::path manifest_path = output_dir / options.manifest_name;
  write_manifest(manifest_path, entries);
  return {output_dir, std::move(entries)};
}

}  // namespace voxrep
