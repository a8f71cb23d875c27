#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <span>
#include <string_view>
#include <vector>

#include "voxrep/manifest.hpp"
#include "voxrep/predictions.hpp"
#include "voxrep/voxel_grid.hpp"

namespace voxrep {

/// Instruction sent with every image unless overridden.
const std::string& default_prompt();

/// Strips markdown fences, takes the first bracketed span that parses as a
/// JSON array, and keeps every record carrying the five fields. Numeric
/// strings and integral floats are coerced, centers are clamped into `dims`.
/// Throws Parse ("no JSON array found") when no array can be located.
ParsedAnnotation tolerant_parse(std::string_view text, const GridDims& dims);

struct PredictionRequest {
  std::vector<std::uint8_t> image_png;
  std::string prompt = default_prompt();
  std::string model_name;
  std::string endpoint_url;
  double temperature = 0.0;
  int max_output_tokens = 2048;

  /// Throws Config/Size unless the image is an expected_size square RGB PNG.
  void validate(int expected_size = 896) const;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;
  /// Each delay is scaled by a uniform factor in [1 - jitter, 1 + jitter].
  double jitter = 0.2;

  std::chrono::milliseconds delay_before(int attempt, double unit_random) const;
};

struct ClientSettings {
  RetryPolicy retry;
  std::string api_key;  // never logged or written to files
  std::chrono::seconds timeout{120};
  int expected_image_size = 896;
};

/// Reads VOXREP_API_KEY; empty when unset.
std::string api_key_from_env();

/// Body of one chat-completions call carrying the prompt and the image as a
/// base64 PNG data URL.
std::string build_request_body(const PredictionRequest& request);

/// Text of choices[0].message.content; throws Format for other shapes.
std::string extract_completion_text(std::string_view response_body);

/// One request with retries on 429, 5xx and transport errors. Never throws
/// for remote failures; they come back as TransportFailure or ParseFailure.
PredictionResult predict(const PredictionRequest& request, const GridDims& dims, const ClientSettings& settings);

/// Runs every manifest scene through predict with at most `parallelism`
/// requests in flight. Results are in manifest order; per-scene problems
/// (including unreadable images) become TransportFailure entries.
std::vector<PredictionResult> predict_batch(const DatasetManifest& manifest, const PredictionRequest& request_template,
                                            const ClientSettings& settings, int parallelism);

std::string base64_encode(std::span<const std::uint8_t> bytes);

}  // namespace voxrep
