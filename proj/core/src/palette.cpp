#include "voxrep/palette.hpp"

#include <limits>
#include <set>

#include "voxrep/error.hpp"

namespace voxrep {

const Palette& default_palette() {
  static const Palette palette = {
      {"red", {230, 25, 25}},      {"green", {60, 180, 75}},     {"dark_green", {0, 100, 0}},
      {"blue", {0, 60, 220}},      {"light_blue", {135, 206, 250}}, {"yellow", {255, 225, 25}},
      {"orange", {245, 130, 48}},  {"purple", {145, 30, 180}},   {"pink", {250, 160, 200}},
      {"brown", {139, 69, 19}},    {"grey", {128, 128, 128}},    {"white", {255, 255, 255}},
  };
  return palette;
}

void validate_palette(std::span<const PaletteColor> palette) {
  if (palette.empty()) throw Error(ErrorKind::Config, "palette is empty");
  std::set<std::string> names;
  std::set<Rgb> colors;
  for (const auto& entry : palette) {
    if (entry.rgb.is_black()) throw Error(ErrorKind::Config, "palette entry '" + entry.name + "' is black");
    if (!names.insert(entry.name).second) throw Error(ErrorKind::Config, "duplicate palette name '" + entry.name + "'");
    if (!colors.insert(entry.rgb).second) throw Error(ErrorKind::Config, "duplicate palette rgb for '" + entry.name + "'");
  }
}

const std::string& nearest_palette_color(Rgb rgb, std::span<const PaletteColor> palette) {
  if (palette.empty()) throw Error(ErrorKind::Config, "palette is empty");
  const PaletteColor* best = nullptr;
  int best_dist = std::numeric_limits<int>::max();
  for (const auto& entry : palette) {
    const int dr = int(rgb.r) - entry.rgb.r;
    const int dg = int(rgb.g) - entry.rgb.g;
    const int db = int(rgb.b) - entry.rgb.b;
    const int dist = dr * dr + dg * dg + db * db;
    if (dist < best_dist) {
      best_dist = dist;
      best = &entry;
    }
  }
  return best->name;
}

std::optional<Rgb> palette_rgb(std::span<const PaletteColor> palette, const std::string& name) {
  for (const auto& entry : palette) {
    if (entry.name == name) return entry.rgb;
  }
  return std::nullopt;
}

}  // namespace voxrep
