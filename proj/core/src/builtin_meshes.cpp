#include <cmath>
#include <numbers>
#include <utility>

#include "voxrep/error.hpp"
#include "voxrep/mesh.hpp"

namespace voxrep {

namespace {

using Profile = std::vector<std::pair<double, double>>;  // (radius, z)

void append(TriangleMesh& dst, const TriangleMesh& src) {
  const auto base = static_cast<std::uint32_t>(dst.vertices.size());
  dst.vertices.insert(dst.vertices.end(), src.vertices.begin(), src.vertices.end());
  for (const auto& t : src.triangles) dst.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
}

TriangleMesh box(Vec3 lo, Vec3 hi) {
  TriangleMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
  }
  const std::uint32_t quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                                     {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    m.triangles.push_back({q[0], q[1], q[2]});
    m.triangles.push_back({q[0], q[2], q[3]});
  }
  return m;
}

// Surface of revolution about +z. A profile point with radius 0 becomes a
// single pole vertex, so profiles starting and ending on the axis are closed.
TriangleMesh lathe(const Profile& profile, Vec3 origin = {}, int segments = 24) {
  TriangleMesh m;
  std::vector<std::vector<std::uint32_t>> rings;
  for (const auto& [r, z] : profile) {
    std::vector<std::uint32_t> ring;
    if (r <= 0.0) {
      ring.assign(static_cast<std::size_t>(segments), static_cast<std::uint32_t>(m.vertices.size()));
      m.vertices.push_back({origin.x, origin.y, origin.z + z});
    } else {
      for (int s = 0; s < segments; ++s) {
        const double a = 2.0 * std::numbers::pi * s / segments;
        ring.push_back(static_cast<std::uint32_t>(m.vertices.size()));
        m.vertices.push_back({origin.x + r * std::cos(a), origin.y + r * std::sin(a), origin.z + z});
      }
    }
    rings.push_back(std::move(ring));
  }
  for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
    const auto& a = rings[k];
    const auto& b = rings[k + 1];
    for (int s = 0; s < segments; ++s) {
      const auto s1 = static_cast<std::size_t>((s + 1) % segments);
      const auto s0 = static_cast<std::size_t>(s);
      if (a[s0] != a[s1]) m.triangles.push_back({a[s0], a[s1], b[s1]});
      if (b[s0] != b[s1]) m.triangles.push_back({a[s0], b[s1], b[s0]});
    }
  }
  return m;
}

TriangleMesh transformed(TriangleMesh m, double yaw, double pitch, Vec3 offset) {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  for (Vec3& v : m.vertices) {
    // pitch about x, then yaw about z
    const Vec3 p{v.x, cp * v.y - sp * v.z, sp * v.y + cp * v.z};
    v = {cy * p.x - sy * p.y + offset.x, sy * p.x + cy * p.y + offset.y, p.z + offset.z};
  }
  return m;
}

// Lathe about +z, then lay it along +x.
TriangleMesh lathe_along_x(const Profile& profile, Vec3 offset) {
  TriangleMesh m = lathe(profile);
  for (Vec3& v : m.vertices) v = {v.z + offset.x, v.y + offset.y, -v.x + offset.z};
  return m;
}

TriangleMesh make_toilet(double t) {
  TriangleMesh m = lathe({{0, 0}, {0.22, 0}, {0.2, 0.25}, {0.32 + 0.04 * t, 0.42}, {0.3, 0.46},
                          {0.26, 0.46}, {0.16, 0.3}, {0, 0.3}});
  append(m, box({-0.45, -0.25, 0.0}, {-0.25, 0.25, 0.85 + 0.1 * t}));
  return m;
}

TriangleMesh make_airplane(double t) {
  TriangleMesh m = lathe_along_x({{0, 0}, {0.05, 0.08}, {0.07, 0.3}, {0.07, 0.8}, {0.03, 1.0}, {0, 1.02}},
                                 {-0.5, 0, 0.1});
  append(m, box({-0.1, -0.5 - 0.1 * t, 0.07}, {0.12, 0.5 + 0.1 * t, 0.11}));
  append(m, box({0.4, -0.18, 0.07}, {0.5, 0.18, 0.1}));
  append(m, box({0.42, -0.015, 0.1}, {0.5, 0.015, 0.3}));
  return m;
}

TriangleMesh make_bathtub(double t) {
  const double len = 1.0 + 0.2 * t, wid = 0.5, hgt = 0.35, wall = 0.05;
  TriangleMesh m = box({0, 0, 0}, {len, wid, wall});
  append(m, box({0, 0, 0}, {wall, wid, hgt}));
  append(m, box({len - wall, 0, 0}, {len, wid, hgt}));
  append(m, box({0, 0, 0}, {len, wall, hgt}));
  append(m, box({0, wid - wall, 0}, {len, wid, hgt}));
  return m;
}

TriangleMesh make_bottle(double t) {
  const double r = 0.16 + 0.04 * t;
  return lathe({{0, 0}, {r, 0}, {r, 0.6}, {0.06, 0.78}, {0.06, 1.0}, {0, 1.0}});
}

TriangleMesh make_bowl(double t) {
  const double r = 0.5 + 0.1 * t;
  return lathe({{0, 0}, {0.22, 0}, {0.4, 0.08}, {r, 0.3}, {r - 0.04, 0.3}, {0.36, 0.12}, {0.2, 0.05}, {0, 0.05}});
}

TriangleMesh make_cone(double t) { return lathe({{0, 0}, {0.4 + 0.1 * t, 0}, {0, 1.0}}); }

TriangleMesh make_cup(double t) {
  const double r = 0.3 + 0.05 * t;
  TriangleMesh m = lathe({{0, 0}, {r, 0}, {r + 0.03, 0.7}, {r - 0.02, 0.7}, {r - 0.05, 0.06}, {0, 0.06}});
  append(m, box({r - 0.02, -0.03, 0.15}, {r + 0.22, 0.03, 0.2}));
  append(m, box({r + 0.16, -0.03, 0.15}, {r + 0.22, 0.03, 0.55}));
  append(m, box({r - 0.02, -0.03, 0.5}, {r + 0.22, 0.03, 0.55}));
  return m;
}

TriangleMesh make_desk(double t) {
  const double len = 1.0, wid = 0.55 + 0.1 * t, top = 0.5;
  TriangleMesh m = box({0, 0, top}, {len, wid, top + 0.05});
  for (const auto& [x, y] : std::vector<std::pair<double, double>>{{0, 0}, {len - 0.05, 0}, {0, wid - 0.05},
                                                                     {len - 0.05, wid - 0.05}}) {
    append(m, box({x, y, 0}, {x + 0.05, y + 0.05, top}));
  }
  append(m, box({0.6, 0, 0.3}, {len, wid, top}));
  return m;
}

TriangleMesh make_guitar(double t) {
  TriangleMesh m = lathe({{0, 0}, {0.22 + 0.02 * t, 0}, {0.22 + 0.02 * t, 0.09}, {0, 0.09}}, {0.0, 0, 0});
  append(m, lathe({{0, 0}, {0.17, 0}, {0.17, 0.09}, {0, 0.09}}, {0.3, 0, 0}));
  append(m, box({0.4, -0.03, 0.03}, {0.9, 0.03, 0.07}));
  append(m, box({0.88, -0.05, 0.03}, {1.0, 0.05, 0.07}));
  return m;
}

TriangleMesh make_laptop(double t) {
  const double wid = 0.7, dep = 0.5;
  TriangleMesh m = box({0, 0, 0}, {wid, dep, 0.03});
  const double tilt = 0.25 + 0.15 * t;
  append(m, transformed(box({0, -0.02, 0}, {wid, 0.01, dep}), 0.0, -tilt, {0, dep, 0.0}));
  return m;
}

TriangleMesh make_plant(double t) {
  TriangleMesh m = lathe({{0, 0}, {0.15, 0}, {0.2, 0.3}, {0, 0.3}});
  const double r = 0.3 + 0.05 * t;
  Profile crown;
  for (int i = 0; i <= 8; ++i) {
    const double a = std::numbers::pi * i / 8.0;
    crown.emplace_back(r * std::sin(a), 0.25 + r - r * std::cos(a));
  }
  crown.front().first = 0.0;
  crown.back().first = 0.0;
  append(m, lathe(crown));
  return m;
}

TriangleMesh make_sofa(double t) {
  const double len = 1.0, dep = 0.45 + 0.05 * t;
  TriangleMesh m = box({0, 0, 0}, {len, dep, 0.22});
  append(m, box({0, dep - 0.12, 0.0}, {len, dep, 0.45}));
  append(m, box({0, 0, 0}, {0.1, dep, 0.32}));
  append(m, box({len - 0.1, 0, 0}, {len, dep, 0.32}));
  return m;
}

TriangleMesh make_stool(double t) {
  const double top = 0.55 + 0.1 * t;
  TriangleMesh m = lathe({{0, 0}, {0.25, 0}, {0.25, 0.06}, {0, 0.06}}, {0, 0, top});
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 3.0;
    const double x = 0.16 * std::cos(a), y = 0.16 * std::sin(a);
    append(m, box({x - 0.03, y - 0.03, 0}, {x + 0.03, y + 0.03, top + 0.01}));
  }
  return m;
}

TriangleMesh make_tent(double t) {
  const double len = 1.0, half = 0.4 + 0.1 * t, ridge = 0.55;
  TriangleMesh m;
  m.vertices = {{0, -half, 0}, {0, half, 0}, {0, 0, ridge}, {len, -half, 0}, {len, half, 0}, {len, 0, ridge}};
  m.triangles = {{0, 2, 1}, {3, 4, 5}, {0, 1, 4}, {0, 4, 3}, {0, 3, 5}, {0, 5, 2}, {1, 2, 5}, {1, 5, 4}};
  return m;
}

}  // namespace

const std::vector<std::string>& default_categories() {
  static const std::vector<std::string> categories = {"toilet", "airplane", "bathtub", "bottle", "bowl",
                                                      "cone",   "cup",      "desk",    "guitar", "laptop",
                                                      "plant",  "sofa",     "stool",   "tent"};
  return categories;
}

MeshLibrary builtin_mesh_library() {
  using Maker = TriangleMesh (*)(double);
  const std::vector<std::pair<std::string, Maker>> makers = {
      {"toilet", make_toilet}, {"airplane", make_airplane}, {"bathtub", make_bathtub}, {"bottle", make_bottle},
      {"bowl", make_bowl},     {"cone", make_cone},         {"cup", make_cup},         {"desk", make_desk},
      {"guitar", make_guitar}, {"laptop", make_laptop},     {"plant", make_plant},     {"sofa", make_sofa},
      {"stool", make_stool},   {"tent", make_tent}};
  MeshLibrary library;
  for (const auto& [name, make] : makers) {
    for (double t : {0.0, 1.0}) library[name].push_back(normalize_mesh(make(t)));
  }
  return library;
}

}  // namespace voxrep
