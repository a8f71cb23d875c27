#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "voxrep/annotation.hpp"

namespace voxrep {

/// Output of the tolerant parser: the surviving records plus why others were
/// dropped, and indices (into annotation.objects) of centers clamped into the grid.
struct ParsedAnnotation {
  SceneAnnotation annotation;
  std::vector<std::string> dropped;
  std::vector<std::size_t> clamped;
};

struct ParseFailure {
  std::string reason;
};

struct TransportFailure {
  int status = 0;  // last HTTP status, 0 when no response arrived
  std::string reason;
};

struct PredictionResult {
  std::string scene_id;
  std::variant<ParsedAnnotation, ParseFailure, TransportFailure> outcome;
  int attempts = 0;
  double latency_ms = 0.0;
  std::string raw_text;

  bool parsed() const { return std::holds_alternative<ParsedAnnotation>(outcome); }
  /// Failed predictions evaluate as zero objects.
  std::vector<ObjectRecord> objects_or_empty() const;
};

/// One JSON line per result. Latency is omitted so files depend only on the
/// responses, not on timing.
std::string prediction_line(const PredictionResult& result);
PredictionResult parse_prediction_line(const std::string& line);

void write_predictions(const std::filesystem::path& path, const std::vector<PredictionResult>& results);
std::vector<PredictionResult> read_predictions(const std::filesystem::path& path);

}  // namespace voxrep
