#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace voxrep {

struct GridDims {
  int w = 100;
  int h = 100;
  int d = 16;

  std::size_t volume() const noexcept {
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * static_cast<std::size_t>(d);
  }
  bool contains(int x, int y, int z) const noexcept {
    return x >= 0 && y >= 0 && z >= 0 && x < w && y < h && z < d;
  }
  /// Throws InvalidDims unless every axis is at least one voxel.
  void validate() const;

  auto operator<=>(const GridDims&) const = default;
};

/// Parses "WxHxD", e.g. "100x100x16".
GridDims parse_dims(const std::string& text);
std::string format_dims(const GridDims& dims);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool is_black() const noexcept { return r == 0 && g == 0 && b == 0; }
  auto operator<=>(const Rgb&) const = default;
};

struct Coord {
  int x = 0;
  int y = 0;
  int z = 0;

  bool operator==(const Coord&) const = default;
  /// Orders like grid storage: z, then y, then x.
  std::strong_ordering operator<=>(const Coord& o) const {
    if (auto c = z <=> o.z; c != 0) return c;
    if (auto c = y <=> o.y; c != 0) return c;
    return x <=> o.x;
  }
};

/// Dense occupancy + color grid. Storage is z-major, then y, then x; pure black
/// marks an empty cell, so an occupied cell can never hold (0,0,0).
class VoxelGrid {
 public:
  explicit VoxelGrid(GridDims dims);

  const GridDims& dims() const noexcept { return dims_; }

  std::optional<Rgb> get(int x, int y, int z) const;
  void set(int x, int y, int z, Rgb rgb);
  void clear(int x, int y, int z);
  bool occupied(int x, int y, int z) const { return get(x, y, z).has_value(); }

  std::size_t index(int x, int y, int z) const;

  /// Raw cells in storage order; black means empty.
  std::span<const Rgb> cells() const noexcept { return cells_; }

  bool operator==(const VoxelGrid&) const = default;

 private:
  void check_bounds(int x, int y, int z) const;

  GridDims dims_;
  std::vector<Rgb> cells_;
};

VoxelGrid new_grid(GridDims dims);
std::size_t occupied_count(const VoxelGrid& grid);

/// Per-axis arithmetic mean, rounded half-up. Throws EmptyComponent on an empty list.
Coord coords_center(std::span<const Coord> coords);

}  // namespace voxrep
