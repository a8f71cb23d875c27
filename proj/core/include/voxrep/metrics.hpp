#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "voxrep/annotation.hpp"

namespace voxrep {

struct MatchPair {
  std::size_t prediction = 0;
  std::size_t truth = 0;
  double distance = 0.0;

  bool operator==(const MatchPair&) const = default;
};

struct MatchSet {
  /// In acceptance order, so distances are non-decreasing.
  std::vector<MatchPair> pairs;
  std::vector<std::size_t> unmatched_predictions;
  std::vector<std::size_t> unmatched_truth;
};

double center_distance(const Coord& a, const Coord& b);

/// Global greedy one-to-one matching: all pairs sorted by (distance,
/// prediction index, truth index), each accepted while both ends are free.
MatchSet match_objects(const std::vector<ObjectRecord>& predicted, const std::vector<ObjectRecord>& truth);

/// Pair-based metrics are pooled over every matched pair of every example and
/// are empty (undefined) when no pair exists anywhere.
struct MetricsReport {
  std::optional<double> avg_center_distance;
  std::optional<double> color_accuracy;
  std::optional<double> desc_accuracy;
  std::optional<double> avg_voxel_count_diff;
  double avg_mismatch_per_example = 0.0;
  std::size_t n_examples = 0;
  std::size_t n_matched_pairs = 0;
};

struct EvalExample {
  std::vector<ObjectRecord> predicted;
  std::vector<ObjectRecord> truth;
};

MetricsReport compute_metrics(const std::vector<EvalExample>& examples);

/// Pairs predictions with manifest scenes by scene id. Scenes without a
/// usable prediction count as empty predictions.
std::vector<EvalExample> join_predictions(const std::filesystem::path& predictions_path,
                                          const std::filesystem::path& manifest_path);

nlohmann::ordered_json to_json(const MetricsReport& report);

}  // namespace voxrep
