#include "voxrep/manifest.hpp"

#include <fstream>

#include "voxrep/error.hpp"

namespace voxrep {

std::string manifest_line(const ManifestEntry& entry) {
  nlohmann::ordered_json j;
  j["scene_id"] = entry.scene_id;
  j["grid_path"] = entry.grid_path;
  j["image_path"] = entry.image_path;
  j["annotation"] = {{"dims", to_json(entry.annotation.dims)}, {"objects", objects_to_json(entry.annotation.objects)}};
  return j.dump();
}

ManifestEntry parse_manifest_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("manifest line is not JSON: ") + e.what());
  }
  try {
    ManifestEntry entry;
    entry.scene_id = j.at("scene_id").get<std::string>();
    entry.grid_path = j.at("grid_path").get<std::string>();
    entry.image_path = j.value("image_path", std::string());
    const auto& ann = j.at("annotation");
    entry.annotation.scene_id = entry.scene_id;
    entry.annotation.dims = dims_from_json(ann.at("dims"));
    for (const auto& o : ann.at("objects")) entry.annotation.objects.push_back(object_from_json(o));
    validate_annotation(entry.annotation);
    return entry;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("bad manifest line: ") + e.what());
  }
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  for (const auto& e : entries) out << manifest_line(e) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  DatasetManifest manifest;
  manifest.base_dir = path.parent_path();
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      manifest.entries.push_back(parse_manifest_line(line));
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + ":" + std::to_string(number) + ": " + e.detail());
    }
  }
  return manifest;
}

}  // namespace voxrep
