#include "voxrep/annotation.hpp"

#include <set>

#include "voxrep/error.hpp"

namespace voxrep {

nlohmann::ordered_json to_json(const ObjectRecord& record) {
  nlohmann::ordered_json j;
  j["id"] = record.id;
  j["color"] = record.color;
  j["description"] = record.description;
  j["number_of_occupied_voxel"] = record.number_of_occupied_voxel;
  j["voxel_coords_center"] = {{"x", record.voxel_coords_center.x},
                              {"y", record.voxel_coords_center.y},
                              {"z", record.voxel_coords_center.z}};
  return j;
}

nlohmann::ordered_json to_json(const GridDims& dims) {
  return {{"w", dims.w}, {"h", dims.h}, {"d", dims.d}};
}

nlohmann::ordered_json objects_to_json(const std::vector<ObjectRecord>& objects) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& o : objects) arr.push_back(to_json(o));
  return arr;
}

ObjectRecord object_from_json(const nlohmann::json& j) {
  try {
    ObjectRecord r;
    r.id = j.at("id").get<std::string>();
    r.color = j.at("color").get<std::string>();
    r.description = j.at("description").get<std::string>();
    r.number_of_occupied_voxel = j.at("number_of_occupied_voxel").get<long long>();
    const auto& c = j.at("voxel_coords_center");
    r.voxel_coords_center = {c.at("x").get<int>(), c.at("y").get<int>(), c.at("z").get<int>()};
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("bad object record: ") + e.what());
  }
}

GridDims dims_from_json(const nlohmann::json& j) {
  try {
    GridDims dims{j.at("w").get<int>(), j.at("h").get<int>(), j.at("d").get<int>()};
    dims.validate();
    return dims;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("bad dims: ") + e.what());
  }
}

void validate_annotation(const SceneAnnotation& annotation) {
  std::set<std::string> ids;
  for (const auto& o : annotation.objects) {
    if (!ids.insert(o.id).second) throw Error(ErrorKind::Format, "duplicate object id '" + o.id + "'");
    const Coord& c = o.voxel_coords_center;
    if (!annotation.dims.contains(c.x, c.y, c.z)) {
      throw Error(ErrorKind::Format, "center of object '" + o.id + "' outside grid");
    }
    if (o.number_of_occupied_voxel < 0) {
      throw Error(ErrorKind::Format, "negative voxel count for object '" + o.id + "'");
    }
  }
}

}  // namespace voxrep
