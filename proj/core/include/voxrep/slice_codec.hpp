#pragma once

#include <string>
#include <vector>

#include "voxrep/image.hpp"
#include "voxrep/voxel_grid.hpp"

namespace voxrep {

enum class UpscaleMode { Replication, Bilinear };

std::string to_string(UpscaleMode mode);
UpscaleMode parse_upscale_mode(const std::string& text);

/// Grid <-> tiled image layout. Defaults give 100x100 slices padded to 112,
/// doubled to 224 and tiled 4x4 into an 896x896 image.
struct EncodeOptions {
  static constexpr int kUpscaleFactor = 2;

  int slice_size = 100;
  int padded_size = 112;
  UpscaleMode upscale_mode = UpscaleMode::Replication;
  int tile_columns = 4;
  int tile_rows = 4;
  Rgb background{};

  int tile_size() const noexcept { return padded_size * kUpscaleFactor; }
  int image_width() const noexcept { return tile_size() * tile_columns; }
  int image_height() const noexcept { return tile_size() * tile_rows; }

  /// Throws Config for inconsistent options and Capacity when `dims` does not
  /// fit (slice larger than slice_size, too few tiles, or fewer than four
  /// pixels per voxel).
  void validate(const GridDims& dims) const;
};

/// One raster per z; pixel (row=y, col=x) holds the voxel color or background.
std::vector<Raster> slice_grid(const VoxelGrid& grid, Rgb background = {});

/// Centers the slice in a padded_size square with floor offsets.
Raster pad_slice(const Raster& slice, int padded_size, Rgb background = {});

/// Doubles both axes. Replication copies each pixel into a 2x2 block; bilinear
/// samples with half-pixel centers and edge clamping.
Raster upscale_slice(const Raster& padded, UpscaleMode mode);

/// Places slice k at tile (k / columns, k % columns).
Raster tile_slices(const std::vector<Raster>& slices, const EncodeOptions& options);

Raster encode(const VoxelGrid& grid, const EncodeOptions& options = {});

/// Inverse of replication-mode encode. Refuses bilinear options and images
/// whose voxel blocks are not uniform 2x2 (LossyMode).
VoxelGrid decode(const Raster& image, const GridDims& dims, const EncodeOptions& options = {});

}  // namespace voxrep
