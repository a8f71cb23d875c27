#include "voxrep/voxelizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "voxrep/error.hpp"

namespace voxrep {

namespace {

// The closed test box is nudged down by this much so a point on a shared face
// belongs to the upper cell only, approximating half-open cells.
constexpr double kHalfOpenShift = 1e-7;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

bool separated_on(const Vec3& axis, const Vec3& v0, const Vec3& v1, const Vec3& v2, double half) {
  const double p0 = dot(axis, v0), p1 = dot(axis, v1), p2 = dot(axis, v2);
  const double r = half * (std::abs(axis.x) + std::abs(axis.y) + std::abs(axis.z));
  return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
}

}  // namespace

void Placement::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorKind::Config, "placement scale must be > 0");
}

TriangleMesh place_mesh(const TriangleMesh& mesh, const Placement& placement) {
  placement.validate();
  const double c = std::cos(placement.rotation_z), s = std::sin(placement.rotation_z);
  TriangleMesh out = mesh;
  for (Vec3& v : out.vertices) {
    const double x = v.x * placement.scale, y = v.y * placement.scale, z = v.z * placement.scale;
    v = {c * x - s * y + placement.translation.x, s * x + c * y + placement.translation.y,
         z + placement.translation.z};
  }
  return out;
}

bool triangle_box_overlap(const Vec3& box_center, double half, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 v0 = sub(a, box_center), v1 = sub(b, box_center), v2 = sub(c, box_center);
  const Vec3 edges[3] = {sub(v1, v0), sub(v2, v1), sub(v0, v2)};
  const Vec3 units[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  for (const Vec3& u : units) {
    if (separated_on(u, v0, v1, v2, half)) return false;
  }
  const Vec3 normal = cross(edges[0], edges[1]);
  const double r = half * (std::abs(normal.x) + std::abs(normal.y) + std::abs(normal.z));
  if (std::abs(dot(normal, v0)) > r) return false;
  for (const Vec3& e : edges) {
    for (const Vec3& u : units) {
      if (separated_on(cross(u, e), v0, v1, v2, half)) return false;
    }
  }
  return true;
}

std::vector<Coord> voxelize_placed_surface(const TriangleMesh& placed, const GridDims& dims) {
  dims.validate();
  if (placed.triangles.empty()) throw Error(ErrorKind::DegenerateMesh, "mesh has no triangles");
  std::vector<char> hit(dims.volume(), 0);
  const auto clamp_axis = [](double v, int n) { return static_cast<int>(std::clamp(std::floor(v), -1.0, double(n))); };

  for (const auto& t : placed.triangles) {
    const Vec3& a = placed.vertices[t[0]];
    const Vec3& b = placed.vertices[t[1]];
    const Vec3& c = placed.vertices[t[2]];
    const int x0 = std::max(0, clamp_axis(std::min({a.x, b.x, c.x}), dims.w) - 1);
    const int y0 = std::max(0, clamp_axis(std::min({a.y, b.y, c.y}), dims.h) - 1);
    const int z0 = std::max(0, clamp_axis(std::min({a.z, b.z, c.z}), dims.d) - 1);
    const int x1 = std::min(dims.w - 1, clamp_axis(std::max({a.x, b.x, c.x}), dims.w) + 1);
    const int y1 = std::min(dims.h - 1, clamp_axis(std::max({a.y, b.y, c.y}), dims.h) + 1);
    const int z1 = std::min(dims.d - 1, clamp_axis(std::max({a.z, b.z, c.z}), dims.d) + 1);
    for (int z = z0; z <= z1; ++z) {
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const std::size_t i = (static_cast<std::size_t>(z) * dims.h + y) * dims.w + x;
          if (hit[i]) continue;
          const Vec3 center{x + 0.5 - kHalfOpenShift, y + 0.5 - kHalfOpenShift, z + 0.5 - kHalfOpenShift};
          if (triangle_box_overlap(center, 0.5, a, b, c)) hit[i] = 1;
        }
      }
    }
  }

  std::vector<Coord> out;
  for (int z = 0; z < dims.d; ++z) {
    for (int y = 0; y < dims.h; ++y) {
      for (int x = 0; x < dims.w; ++x) {
        if (hit[(static_cast<std::size_t>(z) * dims.h + y) * dims.w + x]) out.push_back({x, y, z});
      }
    }
  }
  return out;
}

std::vector<Coord> voxelize_surface(const TriangleMesh& mesh, const Placement& placement, const GridDims& dims) {
  if (mesh.triangles.empty()) throw Error(ErrorKind::DegenerateMesh, "mesh has no triangles");
  return voxelize_placed_surface(place_mesh(mesh, placement), dims);
}

std::vector<Coord> solid_fill(const std::vector<Coord>& surface, const GridDims& dims) {
  if (surface.empty()) return {};
  Coord lo = surface.front(), hi = surface.front();
  for (const Coord& c : surface) {
    if (!dims.contains(c.x, c.y, c.z)) throw Error(ErrorKind::Bounds, "surface voxel outside grid");
    lo = {std::min(lo.x, c.x), std::min(lo.y, c.y), std::min(lo.z, c.z)};
    hi = {std::max(hi.x, c.x), std::max(hi.y, c.y), std::max(hi.z, c.z)};
  }
  // Local box padded by one cell on every side; its shell is exterior by construction.
  const int nx = hi.x - lo.x + 3, ny = hi.y - lo.y + 3, nz = hi.z - lo.z + 3;
  const auto at = [&](int x, int y, int z) { return (static_cast<std::size_t>(z) * ny + y) * nx + x; };
  enum : char { kEmpty = 0, kSurface = 1, kExterior = 2 };
  std::vector<char> cells(static_cast<std::size_t>(nx) * ny * nz, kEmpty);
  for (const Coord& c : surface) cells[at(c.x - lo.x + 1, c.y - lo.y + 1, c.z - lo.z + 1)] = kSurface;

  std::deque<Coord> queue;
  cells[at(0, 0, 0)] = kExterior;
  queue.push_back({0, 0, 0});
  const int steps[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  while (!queue.empty()) {
    const Coord c = queue.front();
    queue.pop_front();
    for (const auto& s : steps) {
      const int x = c.x + s[0], y = c.y + s[1], z = c.z + s[2];
      if (x < 0 || y < 0 || z < 0 || x >= nx || y >= ny || z >= nz) continue;
      char& cell = cells[at(x, y, z)];
      if (cell != kEmpty) continue;
      cell = kExterior;
      queue.push_back({x, y, z});
    }
  }

  std::vector<Coord> out;
  for (int z = 1; z < nz - 1; ++z) {
    for (int y = 1; y < ny - 1; ++y) {
      for (int x = 1; x < nx - 1; ++x) {
        if (cells[at(x, y, z)] != kExterior) out.push_back({x + lo.x - 1, y + lo.y - 1, z + lo.z - 1});
      }
    }
  }
  return out;
}

std::vector<ColoredVoxel> voxelize_object(const TriangleMesh& mesh, const Placement& placement,
                                          const GridDims& dims, Rgb rgb) {
  if (rgb.is_black()) throw Error(ErrorKind::ReservedColor, "rgb (0,0,0) is reserved for empty cells");
  std::vector<ColoredVoxel> out;
  for (const Coord& c : solid_fill(voxelize_surface(mesh, placement, dims), dims)) out.push_back({c, rgb});
  return out;
}

}  // namespace voxrep
