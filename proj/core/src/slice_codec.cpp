#include "voxrep/slice_codec.hpp"

#include <algorithm>
#include <cmath>

#include "voxrep/error.hpp"

namespace voxrep {

std::string to_string(UpscaleMode mode) { return mode == UpscaleMode::Replication ? "replication" : "bilinear"; }

UpscaleMode parse_upscale_mode(const std::string& text) {
  if (text == "replication") return UpscaleMode::Replication;
  if (text == "bilinear") return UpscaleMode::Bilinear;
  throw Error(ErrorKind::Config, "unknown upscale mode '" + text + "'");
}

void EncodeOptions::validate(const GridDims& dims) const {
  dims.validate();
  if (slice_size < 1 || padded_size < slice_size) {
    throw Error(ErrorKind::Config, "need 1 <= slice_size <= padded_size");
  }
  if (tile_columns < 1 || tile_rows < 1) throw Error(ErrorKind::Config, "tile grid must be at least 1x1");
  if (dims.w > slice_size || dims.h > slice_size) {
    throw Error(ErrorKind::Capacity, "slice " + std::to_string(dims.w) + "x" + std::to_string(dims.h) +
                                         " exceeds slice_size " + std::to_string(slice_size));
  }
  if (static_cast<long long>(tile_columns) * tile_rows < dims.d) {
    throw Error(ErrorKind::Capacity, std::to_string(dims.d) + " slices do not fit a " + std::to_string(tile_columns) +
                                         "x" + std::to_string(tile_rows) + " tile grid");
  }
  const long long pixels = static_cast<long long>(image_width()) * image_height();
  const long long needed = 4LL * static_cast<long long>(dims.volume());
  if (pixels < needed) {
    throw Error(ErrorKind::Capacity, "image of " + std::to_string(pixels) + " pixels cannot give 4 pixels to each of " +
                                         std::to_string(dims.volume()) + " voxels");
  }
}

std::vector<Raster> slice_grid(const VoxelGrid& grid, Rgb background) {
  const GridDims& dims = grid.dims();
  std::vector<Raster> slices;
  slices.reserve(static_cast<std::size_t>(dims.d));
  const auto cells = grid.cells();
  std::size_t i = 0;
  for (int z = 0; z < dims.d; ++z) {
    Raster slice(dims.w, dims.h, background);
    for (int y = 0; y < dims.h; ++y) {
      for (int x = 0; x < dims.w; ++x, ++i) {
        if (!cells[i].is_black()) slice.put(y, x, cells[i]);
      }
    }
    slices.push_back(std::move(slice));
  }
  return slices;
}

Raster pad_slice(const Raster& slice, int padded_size, Rgb background) {
  if (slice.width() > padded_size || slice.height() > padded_size) {
    throw Error(ErrorKind::Size, "slice " + std::to_string(slice.width()) + "x" + std::to_string(slice.height()) +
                                     " larger than padded size " + std::to_string(padded_size));
  }
  Raster out(padded_size, padded_size, background);
  const int off_col = (padded_size - slice.width()) / 2;
  const int off_row = (padded_size - slice.height()) / 2;
  for (int r = 0; r < slice.height(); ++r) {
    for (int c = 0; c < slice.width(); ++c) out.put(r + off_row, c + off_col, slice.at(r, c));
  }
  return out;
}

namespace {

Raster replicate2(const Raster& src) {
  Raster out(src.width() * 2, src.height() * 2);
  for (int r = 0; r < src.height(); ++r) {
    for (int c = 0; c < src.width(); ++c) {
      const Rgb v = src.at(r, c);
      out.put(2 * r, 2 * c, v);
      out.put(2 * r, 2 * c + 1, v);
      out.put(2 * r + 1, 2 * c, v);
      out.put(2 * r + 1, 2 * c + 1, v);
    }
  }
  return out;
}

// Destination pixel i samples source coordinate (i + 0.5) / 2 - 0.5.
Raster bilinear2(const Raster& src) {
  Raster out(src.width() * 2, src.height() * 2);
  const auto source = [](int i, int n, int& lo, int& hi, double& frac) {
    const double s = (i + 0.5) / 2.0 - 0.5;
    const double f = std::floor(s);
    frac = s - f;
    lo = std::clamp(static_cast<int>(f), 0, n - 1);
    hi = std::clamp(static_cast<int>(f) + 1, 0, n - 1);
  };
  for (int r = 0; r < out.height(); ++r) {
    int r0, r1;
    double fr;
    source(r, src.height(), r0, r1, fr);
    for (int c = 0; c < out.width(); ++c) {
      int c0, c1;
      double fc;
      source(c, src.width(), c0, c1, fc);
      const Rgb p00 = src.at(r0, c0), p01 = src.at(r0, c1), p10 = src.at(r1, c0), p11 = src.at(r1, c1);
      const auto mix = [&](std::uint8_t Rgb::*ch) {
        const double v = (1 - fr) * ((1 - fc) * (p00.*ch) + fc * (p01.*ch)) + fr * ((1 - fc) * (p10.*ch) + fc * (p11.*ch));
        return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      };
      out.put(r, c, {mix(&Rgb::r), mix(&Rgb::g), mix(&Rgb::b)});
    }
  }
  return out;
}

}  // namespace

Raster upscale_slice(const Raster& padded, UpscaleMode mode) {
  return mode == UpscaleMode::Replication ? replicate2(padded) : bilinear2(padded);
}

Raster tile_slices(const std::vector<Raster>& slices, const EncodeOptions& options) {
  const int tile = options.tile_size();
  if (static_cast<long long>(slices.size()) > static_cast<long long>(options.tile_columns) * options.tile_rows) {
    throw Error(ErrorKind::Capacity, std::to_string(slices.size()) + " slices exceed tile capacity " +
                                         std::to_string(options.tile_columns * options.tile_rows));
  }
  Raster image(options.image_width(), options.image_height(), options.background);
  for (std::size_t k = 0; k < slices.size(); ++k) {
    const Raster& s = slices[k];
    if (s.width() != tile || s.height() != tile) {
      throw Error(ErrorKind::Size, "slice " + std::to_string(k) + " is " + std::to_string(s.width()) + "x" +
                                       std::to_string(s.height()) + ", expected " + std::to_string(tile));
    }
    const int row0 = static_cast<int>(k) / options.tile_columns * tile;
    const int col0 = static_cast<int>(k) % options.tile_columns * tile;
    for (int r = 0; r < tile; ++r) {
      for (int c = 0; c < tile; ++c) image.put(row0 + r, col0 + c, s.at(r, c));
    }
  }
  return image;
}

Raster encode(const VoxelGrid& grid, const EncodeOptions& options) {
  options.validate(grid.dims());
  if (!options.background.is_black()) {
    for (const Rgb& c : grid.cells()) {
      if (c == options.background) throw Error(ErrorKind::ReservedColor, "a voxel uses the background color");
    }
  }
  std::vector<Raster> tiles;
  for (const Raster& slice : slice_grid(grid, options.background)) {
    tiles.push_back(upscale_slice(pad_slice(slice, options.padded_size, options.background), options.upscale_mode));
  }
  return tile_slices(tiles, options);
}

VoxelGrid decode(const Raster& image, const GridDims& dims, const EncodeOptions& options) {
  if (options.upscale_mode != UpscaleMode::Replication) {
    throw Error(ErrorKind::LossyMode, "bilinear-encoded images cannot be decoded exactly");
  }
  options.validate(dims);
  if (image.width() != options.image_width() || image.height() != options.image_height()) {
    throw Error(ErrorKind::Size, "image is " + std::to_string(image.width()) + "x" + std::to_string(image.height()) +
                                     ", expected " + std::to_string(options.image_width()) + "x" +
                                     std::to_string(options.image_height()));
  }
  VoxelGrid grid(dims);
  const int tile = options.tile_size();
  const int off_col = (options.padded_size - dims.w) / 2;
  const int off_row = (options.padded_size - dims.h) / 2;
  for (int z = 0; z < dims.d; ++z) {
    const int row0 = z / options.tile_columns * tile;
    const int col0 = z % options.tile_columns * tile;
    for (int y = 0; y < dims.h; ++y) {
      for (int x = 0; x < dims.w; ++x) {
        const int r = row0 + 2 * (off_row + y);
        const int c = col0 + 2 * (off_col + x);
        const Rgb v = image.at(r, c);
        if (image.at(r, c + 1) != v || image.at(r + 1, c) != v || image.at(r + 1, c + 1) != v) {
          throw Error(ErrorKind::LossyMode, "voxel block at z=" + std::to_string(z) + " (" + std::to_string(x) + "," +
                                                std::to_string(y) + ") is not a uniform 2x2 block");
        }
        if (v != options.background) {
          if (v.is_black()) throw Error(ErrorKind::ReservedColor, "black pixel inside a non-black background image");
          grid.set(x, y, z, v);
        }
      }
    }
  }
  return grid;
}

}  // namespace voxrep
