#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "voxrep/voxel_grid.hpp"

namespace voxrep {

/// Dense 8-bit RGB raster, row-major, three bytes per pixel.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, Rgb fill = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  Rgb at(int row, int col) const;
  void put(int row, int col, Rgb rgb);

  std::span<const std::uint8_t> bytes() const noexcept { return data_; }
  std::span<std::uint8_t> bytes() noexcept { return data_; }

  bool operator==(const Raster&) const = default;

 private:
  std::size_t offset(int row, int col) const;

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// 8-bit RGB PNG without alpha or timestamp chunks, so identical rasters give identical bytes.
std::vector<std::uint8_t> encode_png(const Raster& raster);
/// Accepts any PNG libpng can read; palette/grey/16-bit are expanded to 8-bit RGB, alpha is dropped.
Raster decode_png(std::span<const std::uint8_t> bytes);

void write_png(const std::filesystem::path& path, const Raster& raster);
Raster read_png(const std::filesystem::path& path);

}  // namespace voxrep
