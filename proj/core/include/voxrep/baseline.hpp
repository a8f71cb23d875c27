#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "voxrep/annotation.hpp"
#include "voxrep/manifest.hpp"
#include "voxrep/palette.hpp"
#include "voxrep/voxel_grid.hpp"

namespace voxrep {

/// A maximal connected set of occupied cells, voxels in storage order.
struct Component {
  std::vector<Coord> voxels;
  std::vector<Rgb> colors;
};

enum class Connectivity { Six = 6, TwentySix = 26 };

/// Components ordered by their first cell in storage order.
std::vector<Component> connected_components(const VoxelGrid& grid, Connectivity connectivity = Connectivity::TwentySix);

/// [e2/e1, e3/e1, fill ratio, ln(count)] with bbox extents sorted e1 >= e2 >= e3.
using ShapeFeatures = std::array<double, 4>;

ShapeFeatures shape_features(const std::vector<Coord>& voxels);

/// Nearest-centroid shape classifier, one centroid per category.
struct ShapeStatsModel {
  std::map<std::string, ShapeFeatures> centroids;
  std::map<std::string, std::size_t> sample_counts;

  /// Closest centroid by Euclidean distance; ties go to the lexicographically
  /// first category.
  const std::string& classify(const ShapeFeatures& features) const;
};

/// Mean features of each ground-truth object, whose voxels are recovered from
/// its grid by palette color. Objects whose recovered count disagrees with the
/// annotation are skipped with a warning.
ShapeStatsModel fit_shape_stats(const DatasetManifest& manifest, const Palette& palette = default_palette());

void save_shape_model(const std::filesystem::path& path, const ShapeStatsModel& model);
ShapeStatsModel load_shape_model(const std::filesystem::path& path);

SceneAnnotation extract_semantics(const VoxelGrid& grid, const Palette& palette = default_palette(),
                                  const ShapeStatsModel* model = nullptr,
                                  Connectivity connectivity = Connectivity::TwentySix);

}  // namespace voxrep
