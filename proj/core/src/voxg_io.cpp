#include "voxrep/voxg_io.hpp"

#include <fstream>
#include <iterator>

#include "voxrep/error.hpp"

namespace voxrep {

namespace {

constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderSize = 4 + 1 + 6;

void put_u16(std::vector<std::uint8_t>& out, int v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

int get_u16(std::span<const std::uint8_t> bytes, std::size_t at) {
  return bytes[at] | (bytes[at + 1] << 8);
}

}  // namespace

std::vector<std::uint8_t> encode_voxg(const VoxelGrid& grid) {
  const GridDims& dims = grid.dims();
  if (dims.w > 0xffff || dims.h > 0xffff || dims.d > 0xffff) {
    throw Error(ErrorKind::InvalidDims, "VOXG1 stores 16-bit dimensions");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + grid.cells().size() * 4);
  out.insert(out.end(), {'V', 'O', 'X', 'G', kVersion});
  put_u16(out, dims.w);
  put_u16(out, dims.h);
  put_u16(out, dims.d);
  for (const Rgb& c : grid.cells()) {
    out.push_back(c.is_black() ? 0 : 1);
    out.push_back(c.r);
    out.push_back(c.g);
    out.push_back(c.b);
  }
  return out;
}

VoxelGrid decode_voxg(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) throw Error(ErrorKind::Truncation, "VOXG1 header truncated");
  if (bytes[0] != 'V' || bytes[1] != 'O' || bytes[2] != 'X' || bytes[3] != 'G') {
    throw Error(ErrorKind::Format, "missing VOXG magic");
  }
  if (bytes[4] != kVersion) {
    throw Error(ErrorKind::Format, "unsupported VOXG version " + std::to_string(bytes[4]));
  }
  GridDims dims{get_u16(bytes, 5), get_u16(bytes, 7), get_u16(bytes, 9)};
  VoxelGrid grid(dims);
  const std::size_t expected = kHeaderSize + dims.volume() * 4;
  if (bytes.size() < expected) throw Error(ErrorKind::Truncation, "VOXG1 cell data truncated");
  if (bytes.size() > expected) throw Error(ErrorKind::Format, "trailing bytes after VOXG1 cell data");

  std::size_t at = kHeaderSize;
  for (int z = 0; z < dims.d; ++z) {
    for (int y = 0; y < dims.h; ++y) {
      for (int x = 0; x < dims.w; ++x, at += 4) {
        const std::uint8_t occ = bytes[at];
        const Rgb rgb{bytes[at + 1], bytes[at + 2], bytes[at + 3]};
        if (occ == 0) {
          if (!rgb.is_black()) throw Error(ErrorKind::Format, "empty cell carries a color");
        } else if (occ == 1) {
          grid.set(x, y, z, rgb);  // rejects black
        } else {
          throw Error(ErrorKind::Format, "occupancy byte must be 0 or 1");
        }
      }
    }
  }
  return grid;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

void write_voxg(const std::filesystem::path& path, const VoxelGrid& grid) {
  write_file_bytes(path, encode_voxg(grid));
}

VoxelGrid read_voxg(const std::filesystem::path& path) { return decode_voxg(read_file_bytes(path)); }

}  // namespace voxrep
