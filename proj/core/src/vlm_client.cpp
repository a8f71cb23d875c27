#include "voxrep/vlm_client.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include <httplib.h>

#include "voxrep/error.hpp"
#include "voxrep/image.hpp"
#include "voxrep/voxg_io.hpp"

namespace voxrep {

const std::string& default_prompt() {
  static const std::string prompt =
      "The image is a 3D voxel grid of 100x100x16 voxels. Each 224x224 tile is one depth slice, tiled row-major "
      "with z=0 at the top-left and z=15 at the bottom-right; every voxel is a 2x2 pixel block and black means "
      "empty. Identify every object in the scene. Return only a JSON array of objects with fields id, color, "
      "description, number_of_occupied_voxel, voxel_coords_center, where voxel_coords_center is an object with "
      "integer fields x, y, z in voxel coordinates.";
  return prompt;
}

void PredictionRequest::validate(int expected_size) const {
  if (endpoint_url.empty()) throw Error(ErrorKind::Config, "endpoint URL is empty");
  if (model_name.empty()) throw Error(ErrorKind::Config, "model name is empty");
  if (temperature < 0.0) throw Error(ErrorKind::Config, "temperature must be >= 0");
  if (max_output_tokens < 1) throw Error(ErrorKind::Config, "max_output_tokens must be positive");
  const Raster image = decode_png(image_png);
  if (image.width() != expected_size || image.height() != expected_size) {
    throw Error(ErrorKind::Size, "request image is " + std::to_string(image.width()) + "x" +
                                     std::to_string(image.height()) + ", expected " + std::to_string(expected_size) +
                                     " square");
  }
}

std::chrono::milliseconds RetryPolicy::delay_before(int attempt, double unit_random) const {
  // attempt is 1-based; no delay precedes the first attempt.
  if (attempt <= 1) return std::chrono::milliseconds(0);
  const double base = static_cast<double>(base_delay.count()) * std::pow(factor, attempt - 2);
  const double scaled = base * (1.0 + jitter * (2.0 * unit_random - 1.0));
  return std::chrono::milliseconds(static_cast<long long>(std::max(0.0, scaled)));
}

std::string api_key_from_env() {
  const char* v = std::getenv("VOXREP_API_KEY");
  return v ? std::string(v) : std::string();
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i + 1 == bytes.size()) {
    const std::uint32_t v = bytes[i] << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == bytes.size()) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::string build_request_body(const PredictionRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = request.model_name;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "user"},
        {"content", nlohmann::ordered_json::array(
                        {{{"type", "text"}, {"text", request.prompt}},
                         {{"type", "image_url"},
                          {"image_url", {{"url", "data:image/png;base64," + base64_encode(request.image_png)}}}}})}}});
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_output_tokens;
  return body.dump();
}

std::string extract_completion_text(std::string_view response_body) {
  const auto j = nlohmann::json::parse(response_body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::Format, "response body is not JSON");
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
    if (content.is_array()) {
      std::string text;
      for (const auto& part : content) {
        if (part.is_object() && part.value("type", "") == "text") text += part.value("text", "");
      }
      return text;
    }
  } catch (const nlohmann::json::exception&) {
  }
  throw Error(ErrorKind::Format, "response has no choices[0].message.content");
}

namespace {

struct Endpoint {
  std::string scheme_host_port;
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorKind::Config, "endpoint URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  e.scheme_host_port = url.substr(0, path_start);
  std::string base = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!base.empty() && base.back() == '/') base.pop_back();
  const std::string suffix = "/chat/completions";
  if (base.size() >= suffix.size() && base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
    e.path = base;
  } else {
    e.path = base + suffix;
  }
  return e;
}

bool retryable(int status) { return status == 429 || status >= 500; }

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

PredictionResult predict(const PredictionRequest& request, const GridDims& dims, const ClientSettings& settings) {
  const auto started = std::chrono::steady_clock::now();
  PredictionResult result;
  const Endpoint endpoint = split_endpoint(request.endpoint_url);
  httplib::Client client(endpoint.scheme_host_port);
  if (!client.is_valid()) {
    result.outcome = TransportFailure{0, "unsupported endpoint " + endpoint.scheme_host_port};
    return result;
  }
  client.set_connection_timeout(settings.timeout);
  client.set_read_timeout(settings.timeout);
  client.set_write_timeout(settings.timeout);

  httplib::Headers headers;
  if (!settings.api_key.empty()) headers.emplace("Authorization", "Bearer " + settings.api_key);
  const std::string body = build_request_body(request);

  std::mt19937_64 jitter_rng(std::random_device{}());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int max_attempts = std::max(1, settings.retry.max_attempts);
  int last_status = 0;
  std::string last_reason;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    std::this_thread::sleep_for(settings.retry.delay_before(attempt, unit(jitter_rng)));
    result.attempts = attempt;
    auto res = client.Post(endpoint.path, headers, body, "application/json");
    if (!res) {
      last_status = 0;
      last_reason = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    last_status = res->status;
    if (res->status >= 200 && res->status < 300) {
      result.raw_text = res->body;
      result.latency_ms = elapsed_ms(started);
      try {
        const std::string text = extract_completion_text(res->body);
        result.raw_text = text;
        ParsedAnnotation parsed = tolerant_parse(text, dims);
        result.outcome = std::move(parsed);
      } catch (const Error& e) {
        result.outcome = ParseFailure{e.detail()};
      }
      return result;
    }
    last_reason = "HTTP " + std::to_string(res->status);
    if (!retryable(res->status)) break;
  }
  result.latency_ms = elapsed_ms(started);
  result.outcome = TransportFailure{last_status, last_reason};
  return result;
}

std::vector<PredictionResult> predict_batch(const DatasetManifest& manifest, const PredictionRequest& request_template,
                                            const ClientSettings& settings, int parallelism) {
  if (parallelism < 1) throw Error(ErrorKind::Config, "parallelism must be positive");
  const std::size_t n = manifest.entries.size();
  std::vector<PredictionResult> results(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const ManifestEntry& entry = manifest.entries[i];
      PredictionResult r;
      try {
        PredictionRequest request = request_template;
        request.image_png = read_file_bytes(manifest.resolve(entry.image_path));
        request.validate(settings.expected_image_size);
        r = predict(request, entry.annotation.dims, settings);
      } catch (const Error& e) {
        r.outcome = TransportFailure{0, e.detail()};
      }
      r.scene_id = entry.scene_id;
      if (auto* parsed = std::get_if<ParsedAnnotation>(&r.outcome)) parsed->annotation.scene_id = entry.scene_id;
      results[i] = std::move(r);
    }
  };
  const int threads_wanted = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(parallelism), std::max<std::size_t>(n, 1)));
  std::vector<std::thread> threads;
  for (int t = 1; t < threads_wanted; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return results;
}

}  // namespace voxrep
