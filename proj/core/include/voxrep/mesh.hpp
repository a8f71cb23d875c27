#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace voxrep {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Vec3&) const = default;
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;

  bool operator==(const TriangleMesh&) const = default;
};

struct Bounds3 {
  Vec3 min;
  Vec3 max;
};

/// Axis-aligned bounds of the vertex set; throws DegenerateMesh if there are no vertices.
Bounds3 mesh_bounds(const TriangleMesh& mesh);

/// Parses ASCII OFF. Accepts the ModelNet variant where the counts follow "OFF"
/// on the same line, skips '#' comments and blank lines, fan-triangulates
/// polygons from their first vertex and ignores the edge count.
TriangleMesh parse_off(std::string_view text);
TriangleMesh read_off(const std::filesystem::path& path);
std::string write_off(const TriangleMesh& mesh);

/// Centers the bounding box on the origin and scales the largest extent to 1.
TriangleMesh normalize_mesh(const TriangleMesh& mesh);

using MeshLibrary = std::map<std::string, std::vector<TriangleMesh>>;

/// Loads `<root>/<category>/<split>/<file>.off`. When `categories` is non-empty
/// only those directories are read. Meshes are normalized and sorted by path.
MeshLibrary load_modelnet_tree(const std::filesystem::path& root,
                               const std::vector<std::string>& categories = {});

}  // namespace voxrep

namespace voxrep {

/// The 14 distinct categories sampled by the scene generator by default.
const std::vector<std::string>& default_categories();

/// Procedural stand-ins for each default category (two proportion variants
/// each), already normalized. Used when no ModelNet tree is supplied.
MeshLibrary builtin_mesh_library();

}  // namespace voxrep
