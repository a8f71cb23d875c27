#include "voxrep/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "voxrep/error.hpp"
#include "voxrep/voxg_io.hpp"

namespace voxrep {

std::vector<Component> connected_components(const VoxelGrid& grid, Connectivity connectivity) {
  const GridDims& dims = grid.dims();
  const auto cells = grid.cells();
  std::vector<char> seen(cells.size(), 0);

  std::vector<std::array<int, 3>> steps;
  for (int dz = -1; dz <= 1; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int manhattan = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (manhattan == 0) continue;
        if (connectivity == Connectivity::Six && manhattan != 1) continue;
        steps.push_back({dx, dy, dz});
      }
    }
  }

  std::vector<Component> components;
  std::vector<Coord> stack;
  std::size_t i = 0;
  for (int z = 0; z < dims.d; ++z) {
    for (int y = 0; y < dims.h; ++y) {
      for (int x = 0; x < dims.w; ++x, ++i) {
        if (cells[i].is_black() || seen[i]) continue;
        Component comp;
        seen[i] = 1;
        stack.push_back({x, y, z});
        while (!stack.empty()) {
          const Coord c = stack.back();
          stack.pop_back();
          comp.voxels.push_back(c);
          for (const auto& s : steps) {
            const int nx = c.x + s[0], ny = c.y + s[1], nz = c.z + s[2];
            if (!dims.contains(nx, ny, nz)) continue;
            const std::size_t j = (static_cast<std::size_t>(nz) * dims.h + ny) * dims.w + nx;
            if (seen[j] || cells[j].is_black()) continue;
            seen[j] = 1;
            stack.push_back({nx, ny, nz});
          }
        }
        std::sort(comp.voxels.begin(), comp.voxels.end());
        comp.colors.reserve(comp.voxels.size());
        for (const Coord& c : comp.voxels) comp.colors.push_back(*grid.get(c.x, c.y, c.z));
        components.push_back(std::move(comp));
      }
    }
  }
  return components;
}

ShapeFeatures shape_features(const std::vector<Coord>& voxels) {
  if (voxels.empty()) throw Error(ErrorKind::EmptyComponent, "no voxels to describe");
  Coord lo = voxels.front(), hi = voxels.front();
  for (const Coord& c : voxels) {
    lo = {std::min(lo.x, c.x), std::min(lo.y, c.y), std::min(lo.z, c.z)};
    hi = {std::max(hi.x, c.x), std::max(hi.y, c.y), std::max(hi.z, c.z)};
  }
  std::array<double, 3> e = {double(hi.x - lo.x + 1), double(hi.y - lo.y + 1), double(hi.z - lo.z + 1)};
  std::sort(e.begin(), e.end(), std::greater<>());
  const double count = static_cast<double>(voxels.size());
  return {e[1] / e[0], e[2] / e[0], count / (e[0] * e[1] * e[2]), std::log(count)};
}

const std::string& ShapeStatsModel::classify(const ShapeFeatures& features) const {
  if (centroids.empty()) throw Error(ErrorKind::Config, "shape model has no centroids");
  const std::string* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& [category, centroid] : centroids) {  // std::map: lexicographic order
    double dist = 0.0;
    for (std::size_t k = 0; k < features.size(); ++k) dist += (features[k] - centroid[k]) * (features[k] - centroid[k]);
    if (dist < best_dist) {
      best_dist = dist;
      best = &category;
    }
  }
  return *best;
}

ShapeStatsModel fit_shape_stats(const DatasetManifest& manifest, const Palette& palette) {
  if (manifest.entries.empty()) throw Error(ErrorKind::Config, "cannot fit shape statistics on an empty manifest");
  std::map<std::string, ShapeFeatures> sums;
  ShapeStatsModel model;
  for (const auto& entry : manifest.entries) {
    VoxelGrid grid = [&] {
      try {
        return read_voxg(manifest.resolve(entry.grid_path));
      } catch (const Error& e) {
        throw Error(ErrorKind::Io, "scene " + entry.scene_id + ": " + e.detail());
      }
    }();
    for (const auto& object : entry.annotation.objects) {
      const auto rgb = palette_rgb(palette, object.color);
      if (!rgb) {
        std::fprintf(stderr, "warning: %s/%s: color '%s' not in palette, skipped\n", entry.scene_id.c_str(),
                     object.id.c_str(), object.color.c_str());
        continue;
      }
      std::vector<Coord> voxels;
      const GridDims& dims = grid.dims();
      const auto cells = grid.cells();
      std::size_t i = 0;
      for (int z = 0; z < dims.d; ++z)
        for (int y = 0; y < dims.h; ++y)
          for (int x = 0; x < dims.w; ++x, ++i)
            if (cells[i] == *rgb) voxels.push_back({x, y, z});
      if (static_cast<long long>(voxels.size()) != object.number_of_occupied_voxel || voxels.empty()) {
        std::fprintf(stderr, "warning: %s/%s: recovered %zu voxels, annotation says %lld, skipped\n",
                     entry.scene_id.c_str(), object.id.c_str(), voxels.size(), object.number_of_occupied_voxel);
        continue;
      }
      const ShapeFeatures f = shape_features(voxels);
      auto& sum = sums[object.description];
      for (std::size_t k = 0; k < f.size(); ++k) sum[k] += f[k];
      ++model.sample_counts[object.description];
    }
  }
  for (const auto& [category, sum] : sums) {
    const double n = static_cast<double>(model.sample_counts[category]);
    ShapeFeatures mean{};
    for (std::size_t k = 0; k < sum.size(); ++k) mean[k] = sum[k] / n;
    model.centroids[category] = mean;
  }
  if (model.centroids.empty()) throw Error(ErrorKind::Config, "no usable ground-truth objects in manifest");
  return model;
}

void save_shape_model(const std::filesystem::path& path, const ShapeStatsModel& model) {
  nlohmann::ordered_json j;
  j["features"] = {"extent_ratio_2", "extent_ratio_3", "fill_ratio", "log_voxel_count"};
  j["centroids"] = nlohmann::ordered_json::object();
  j["sample_counts"] = nlohmann::ordered_json::object();
  for (const auto& [category, centroid] : model.centroids) {
    j["centroids"][category] = centroid;
    j["sample_counts"][category] = model.sample_counts.count(category) ? model.sample_counts.at(category) : 0;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

ShapeStatsModel load_shape_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    ShapeStatsModel model;
    for (const auto& [category, value] : j.at("centroids").items()) {
      model.centroids[category] = value.get<ShapeFeatures>();
    }
    if (j.contains("sample_counts")) {
      for (const auto& [category, value] : j.at("sample_counts").items()) {
        model.sample_counts[category] = value.get<std::size_t>();
      }
    }
    if (model.centroids.empty()) throw Error(ErrorKind::Config, "shape model has no centroids");
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, path.string() + ": " + e.what());
  }
}

SceneAnnotation extract_semantics(const VoxelGrid& grid, const Palette& palette, const ShapeStatsModel* model,
                                  Connectivity connectivity) {
  if (palette.empty()) throw Error(ErrorKind::Config, "palette is empty");
  SceneAnnotation annotation{"", grid.dims(), {}};
  for (const Component& comp : connected_components(grid, connectivity)) {
    std::vector<std::size_t> votes(palette.size(), 0);
    for (const Rgb& c : comp.colors) {
      const std::string& name = nearest_palette_color(c, palette);
      for (std::size_t k = 0; k < palette.size(); ++k) {
        if (palette[k].name == name) {
          ++votes[k];
          break;
        }
      }
    }
    // max_element returns the first maximum, i.e. the earlier palette index on ties.
    const auto modal = static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    ObjectRecord record;
    record.id = std::to_string(annotation.objects.size());
    record.color = palette[modal].name;
    record.description = model ? model->classify(shape_features(comp.voxels)) : "unknown";
    record.number_of_occupied_voxel = static_cast<long long>(comp.voxels.size());
    record.voxel_coords_center = coords_center(comp.voxels);
    annotation.objects.push_back(std::move(record));
  }
  return annotation;
}

}  // namespace voxrep
