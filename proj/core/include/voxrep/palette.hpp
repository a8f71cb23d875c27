#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voxrep/voxel_grid.hpp"

namespace voxrep {

struct PaletteColor {
  std::string name;
  Rgb rgb;
};

using Palette = std::vector<PaletteColor>;

/// Twelve named colors, none of them black.
const Palette& default_palette();

/// Checks name/rgb uniqueness and the no-black rule; throws Config.
void validate_palette(std::span<const PaletteColor> palette);

/// Name of the entry with the smallest squared RGB distance; ties go to the
/// earlier entry. Throws Config on an empty palette.
const std::string& nearest_palette_color(Rgb rgb, std::span<const PaletteColor> palette);

std::optional<Rgb> palette_rgb(std::span<const PaletteColor> palette, const std::string& name);

}  // namespace voxrep
