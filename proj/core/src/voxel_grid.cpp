#include "voxrep/voxel_grid.hpp"

#include <charconv>

#include "voxrep/error.hpp"

namespace voxrep {

void GridDims::validate() const {
  if (w < 1 || h < 1 || d < 1) {
    throw Error(ErrorKind::InvalidDims, "grid dimensions must be >= 1, got " + format_dims(*this));
  }
}

GridDims parse_dims(const std::string& text) {
  GridDims dims;
  int* axes[3] = {&dims.w, &dims.h, &dims.d};
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int i = 0; i < 3; ++i) {
    auto [next, ec] = std::from_chars(p, end, *axes[i]);
    if (ec != std::errc()) throw Error(ErrorKind::InvalidDims, "cannot parse dims '" + text + "'");
    p = next;
    if (i < 2) {
      if (p == end || (*p != 'x' && *p != 'X')) {
        throw Error(ErrorKind::InvalidDims, "expected WxHxD, got '" + text + "'");
      }
      ++p;
    }
  }
  if (p != end) throw Error(ErrorKind::InvalidDims, "trailing characters in dims '" + text + "'");
  dims.validate();
  return dims;
}

std::string format_dims(const GridDims& dims) {
  return std::to_string(dims.w) + "x" + std::to_string(dims.h) + "x" + std::to_string(dims.d);
}

VoxelGrid::VoxelGrid(GridDims dims) : dims_(dims) {
  dims_.validate();
  cells_.assign(dims_.volume(), Rgb{});
}

void VoxelGrid::check_bounds(int x, int y, int z) const {
  if (!dims_.contains(x, y, z)) {
    throw Error(ErrorKind::Bounds, "voxel (" + std::to_string(x) + "," + std::to_string(y) + "," +
                                       std::to_string(z) + ") outside " + format_dims(dims_));
  }
}

std::size_t VoxelGrid::index(int x, int y, int z) const {
  check_bounds(x, y, z);
  return (static_cast<std::size_t>(z) * dims_.h + static_cast<std::size_t>(y)) * dims_.w +
         static_cast<std::size_t>(x);
}

std::optional<Rgb> VoxelGrid::get(int x, int y, int z) const {
  const Rgb& cell = cells_[index(x, y, z)];
  if (cell.is_black()) return std::nullopt;
  return cell;
}

void VoxelGrid::set(int x, int y, int z, Rgb rgb) {
  const std::size_t i = index(x, y, z);
  if (rgb.is_black()) throw Error(ErrorKind::ReservedColor, "rgb (0,0,0) is reserved for empty cells");
  cells_[i] = rgb;
}

void VoxelGrid::clear(int x, int y, int z) { cells_[index(x, y, z)] = Rgb{}; }

VoxelGrid new_grid(GridDims dims) { return VoxelGrid(dims); }

std::size_t occupied_count(const VoxelGrid& grid) {
  std::size_t n = 0;
  for (const Rgb& c : grid.cells()) n += c.is_black() ? 0 : 1;
  return n;
}

namespace {

// floor((2*sum + n) / (2*n)) == floor(sum/n + 1/2), i.e. round half-up.
int round_half_up_mean(long long sum, long long n) {
  const long long num = 2 * sum + n;
  const long long den = 2 * n;
  long long q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return static_cast<int>(q);
}

}  // namespace

Coord coords_center(std::span<const Coord> coords) {
  if (coords.empty()) throw Error(ErrorKind::EmptyComponent, "cannot take the center of zero voxels");
  long long sx = 0, sy = 0, sz = 0;
  for (const Coord& c : coords) {
    sx += c.x;
    sy += c.y;
    sz += c.z;
  }
  const auto n = static_cast<long long>(coords.size());
  return {round_half_up_mean(sx, n), round_half_up_mean(sy, n), round_half_up_mean(sz, n)};
}

}  // namespace voxrep
