#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "voxrep/voxel_grid.hpp"

namespace voxrep {

// VOXG1 layout: "VOXG", version byte 1, u16le w/h/d, then w*h*d cells in
// z,y,x order as 4 bytes each (occupancy 0|1, r, g, b).

std::vector<std::uint8_t> encode_voxg(const VoxelGrid& grid);
VoxelGrid decode_voxg(std::span<const std::uint8_t> bytes);

void write_voxg(const std::filesystem::path& path, const VoxelGrid& grid);
VoxelGrid read_voxg(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace voxrep
