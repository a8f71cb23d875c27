#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "voxrep/annotation.hpp"

namespace voxrep {

/// One JSON line of a dataset manifest. Paths are stored relative to the
/// manifest's directory so a dataset can be moved or hashed as a unit.
struct ManifestEntry {
  std::string scene_id;
  std::string grid_path;
  std::string image_path;
  SceneAnnotation annotation;

  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  std::filesystem::path base_dir;
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const std::string& relative) const { return base_dir / relative; }
};

std::string manifest_line(const ManifestEntry& entry);
ManifestEntry parse_manifest_line(const std::string& line);

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);
DatasetManifest read_manifest(const std::filesystem::path& path);

}  // namespace voxrep
