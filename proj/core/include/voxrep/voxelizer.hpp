#pragma once

#include <vector>

#include "voxrep/mesh.hpp"
#include "voxrep/voxel_grid.hpp"

namespace voxrep {

/// Yaw about +z, uniform scale (voxels per mesh unit), then translation in voxel space.
struct Placement {
  double rotation_z = 0.0;
  double scale = 1.0;
  Vec3 translation;

  void validate() const;
};

struct ColoredVoxel {
  Coord coord;
  Rgb rgb;

  bool operator==(const ColoredVoxel&) const = default;
};

TriangleMesh place_mesh(const TriangleMesh& mesh, const Placement& placement);

/// Exact triangle / axis-aligned box overlap by separating axes (three box
/// normals, the triangle normal and nine edge cross products).
bool triangle_box_overlap(const Vec3& box_center, double half_size, const Vec3& a, const Vec3& b, const Vec3& c);

/// Cells [x,x+1)x[y,y+1)x[z,z+1) touched by any placed triangle, clipped to
/// dims, in ascending storage order.
std::vector<Coord> voxelize_surface(const TriangleMesh& mesh, const Placement& placement, const GridDims& dims);

/// Same, for a mesh already in voxel coordinates.
std::vector<Coord> voxelize_placed_surface(const TriangleMesh& placed, const GridDims& dims);

/// Closes the shell: every cell of the surface bounding box not 6-reachable
/// from outside it through empty cells. Ascending storage order.
std::vector<Coord> solid_fill(const std::vector<Coord>& surface, const GridDims& dims);

std::vector<ColoredVoxel> voxelize_object(const TriangleMesh& mesh, const Placement& placement,
                                          const GridDims& dims, Rgb rgb);

}  // namespace voxrep
