#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "voxrep/annotation.hpp"
#include "voxrep/manifest.hpp"
#include "voxrep/mesh.hpp"
#include "voxrep/palette.hpp"
#include "voxrep/slice_codec.hpp"
#include "voxrep/voxel_grid.hpp"

namespace voxrep {

struct SceneSpec {
  GridDims dims;
  std::vector<std::string> categories = default_categories();
  int objects_min = 1;
  int objects_max = 5;
  Palette palette = default_palette();
  /// Range for an object's largest extent, in voxels.
  double scale_min = 10.0;
  double scale_max = 35.0;
  int min_voxels = 20;
  /// Accepted objects keep at least this many empty voxels between them
  /// (Chebyshev distance > clearance).
  int clearance = 2;
  int max_attempts = 50;
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct SynthScene {
  VoxelGrid grid;
  SceneAnnotation annotation;
  int skipped_objects = 0;
};

std::string scene_name(std::size_t scene_index);

/// Deterministic in (spec, scene_index, library). Objects stand on z = 0,
/// never overlap and never clip; an object that cannot be placed within
/// max_attempts is skipped and counted.
SynthScene synth_scene(const SceneSpec& spec, std::size_t scene_index, const MeshLibrary& library);

struct DatasetOptions {
  EncodeOptions encode;
  int jobs = 1;
  std::string manifest_name = "manifest.jsonl";
};

/// Writes scene_NNNNNN.voxg / .png per scene and a manifest ordered by scene
/// index regardless of `jobs`. Returns the manifest as written.
DatasetManifest synth_dataset(const SceneSpec& spec, std::size_t n_scenes, const std::filesystem::path& output_dir,
                              const MeshLibrary& library, const DatasetOptions& options = {});

}  // namespace voxrep
