#include "voxrep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "voxrep/error.hpp"
#include "voxrep/manifest.hpp"
#include "voxrep/predictions.hpp"

namespace voxrep {

double center_distance(const Coord& a, const Coord& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

MatchSet match_objects(const std::vector<ObjectRecord>& predicted, const std::vector<ObjectRecord>& truth) {
  std::vector<MatchPair> candidates;
  candidates.reserve(predicted.size() * truth.size());
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    for (std::size_t t = 0; t < truth.size(); ++t) {
      candidates.push_back({p, t, center_distance(predicted[p].voxel_coords_center, truth[t].voxel_coords_center)});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const MatchPair& a, const MatchPair& b) {
    return std::tie(a.distance, a.prediction, a.truth) < std::tie(b.distance, b.prediction, b.truth);
  });

  MatchSet out;
  std::vector<char> pred_used(predicted.size(), 0), truth_used(truth.size(), 0);
  const std::size_t target = std::min(predicted.size(), truth.size());
  for (const MatchPair& c : candidates) {
    if (out.pairs.size() == target) break;
    if (pred_used[c.prediction] || truth_used[c.truth]) continue;
    pred_used[c.prediction] = truth_used[c.truth] = 1;
    out.pairs.push_back(c);
  }
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    if (!pred_used[p]) out.unmatched_predictions.push_back(p);
  }
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (!truth_used[t]) out.unmatched_truth.push_back(t);
  }
  return out;
}

MetricsReport compute_metrics(const std::vector<EvalExample>& examples) {
  if (examples.empty()) throw Error(ErrorKind::Config, "no examples to evaluate");
  double distance_sum = 0.0, count_diff_sum = 0.0, mismatch_sum = 0.0;
  std::size_t color_hits = 0, desc_hits = 0, pairs = 0;
  for (const auto& ex : examples) {
    const MatchSet m = match_objects(ex.predicted, ex.truth);
    for (const MatchPair& pair : m.pairs) {
      const ObjectRecord& p = ex.predicted[pair.prediction];
      const ObjectRecord& t = ex.truth[pair.truth];
      distance_sum += pair.distance;
      count_diff_sum += std::abs(static_cast<double>(p.number_of_occupied_voxel - t.number_of_occupied_voxel));
      color_hits += p.color == t.color ? 1 : 0;
      desc_hits += p.description == t.description ? 1 : 0;
    }
    pairs += m.pairs.size();
    mismatch_sum += std::abs(static_cast<double>(ex.predicted.size()) - static_cast<double>(ex.truth.size()));
  }
  MetricsReport report;
  report.n_examples = examples.size();
  report.n_matched_pairs = pairs;
  report.avg_mismatch_per_example = mismatch_sum / static_cast<double>(examples.size());
  if (pairs > 0) {
    const double n = static_cast<double>(pairs);
    report.avg_center_distance = distance_sum / n;
    report.color_accuracy = static_cast<double>(color_hits) / n;
    report.desc_accuracy = static_cast<double>(desc_hits) / n;
    report.avg_voxel_count_diff = count_diff_sum / n;
  }
  return report;
}

std::vector<EvalExample> join_predictions(const std::filesystem::path& predictions_path,
                                          const std::filesystem::path& manifest_path) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  std::map<std::string, std::vector<ObjectRecord>> predicted;
  for (const auto& record : read_predictions(predictions_path)) predicted[record.scene_id] = record.objects_or_empty();
  std::vector<EvalExample> examples;
  examples.reserve(manifest.entries.size());
  for (const auto& entry : manifest.entries) {
    EvalExample ex;
    ex.truth = entry.annotation.objects;
    if (auto it = predicted.find(entry.scene_id); it != predicted.end()) ex.predicted = it->second;
    examples.push_back(std::move(ex));
  }
  return examples;
}

nlohmann::ordered_json to_json(const MetricsReport& report) {
  const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
  nlohmann::ordered_json j;
  j["avg_center_distance"] = opt(report.avg_center_distance);
  j["color_accuracy"] = opt(report.color_accuracy);
  j["desc_accuracy"] = opt(report.desc_accuracy);
  j["avg_voxel_count_diff"] = opt(report.avg_voxel_count_diff);
  j["avg_mismatch_per_example"] = report.avg_mismatch_per_example;
  j["n_examples"] = report.n_examples;
  j["n_matched_pairs"] = report.n_matched_pairs;
  j["matching"] = "global greedy by (distance, prediction index, truth index)";
  j["pooling"] = "pair metrics averaged over all matched pairs of all examples";
  return j;
}

}  // namespace voxrep
