#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "voxrep/voxel_grid.hpp"

namespace voxrep {

/// One object in the "voxel semantics" output. Field names on the wire are
/// id, color, description, number_of_occupied_voxel, voxel_coords_center.
struct ObjectRecord {
  std::string id;
  std::string color;
  std::string description;
  long long number_of_occupied_voxel = 0;
  Coord voxel_coords_center;

  bool operator==(const ObjectRecord&) const = default;
};

struct SceneAnnotation {
  std::string scene_id;
  GridDims dims;
  std::vector<ObjectRecord> objects;

  bool operator==(const SceneAnnotation&) const = default;
};

nlohmann::ordered_json to_json(const ObjectRecord& record);
nlohmann::ordered_json to_json(const GridDims& dims);
/// The object list only, in the listing format a model is asked to emit.
nlohmann::ordered_json objects_to_json(const std::vector<ObjectRecord>& objects);

/// Strict readers used for files this toolkit writes itself; throw Format.
ObjectRecord object_from_json(const nlohmann::json& j);
GridDims dims_from_json(const nlohmann::json& j);

/// Checks id uniqueness and that every center lies within dims; throws Format.
void validate_annotation(const SceneAnnotation& annotation);

}  // namespace voxrep
