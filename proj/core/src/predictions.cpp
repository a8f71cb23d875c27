#include "voxrep/predictions.hpp"

#include <fstream>

#include "voxrep/error.hpp"

namespace voxrep {

std::vector<ObjectRecord> PredictionResult::objects_or_empty() const {
  if (const auto* p = std::get_if<ParsedAnnotation>(&outcome)) return p->annotation.objects;
  return {};
}

std::string prediction_line(const PredictionResult& result) {
  nlohmann::ordered_json j;
  j["scene_id"] = result.scene_id;
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, ParsedAnnotation>) {
          j["outcome"] = "parsed";
          j["attempts"] = result.attempts;
          j["objects"] = objects_to_json(o.annotation.objects);
          j["dropped"] = o.dropped;
          j["clamped"] = o.clamped;
        } else if constexpr (std::is_same_v<T, ParseFailure>) {
          j["outcome"] = "parse_failure";
          j["attempts"] = result.attempts;
          j["reason"] = o.reason;
          j["objects"] = nlohmann::ordered_json::array();
        } else {
          j["outcome"] = "transport_failure";
          j["attempts"] = result.attempts;
          j["http_status"] = o.status;
          j["reason"] = o.reason;
          j["objects"] = nlohmann::ordered_json::array();
        }
      },
      result.outcome);
  j["raw_text"] = result.raw_text;
  return j.dump();
}

PredictionResult parse_prediction_line(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    PredictionResult r;
    r.scene_id = j.at("scene_id").get<std::string>();
    r.attempts = j.value("attempts", 0);
    r.raw_text = j.value("raw_text", std::string());
    const auto outcome = j.at("outcome").get<std::string>();
    if (outcome == "parsed") {
      ParsedAnnotation p;
      p.annotation.scene_id = r.scene_id;
      for (const auto& o : j.at("objects")) p.annotation.objects.push_back(object_from_json(o));
      if (j.contains("dropped")) p.dropped = j.at("dropped").get<std::vector<std::string>>();
      if (j.contains("clamped")) p.clamped = j.at("clamped").get<std::vector<std::size_t>>();
      r.outcome = std::move(p);
    } else if (outcome == "parse_failure") {
      r.outcome = ParseFailure{j.value("reason", std::string())};
    } else if (outcome == "transport_failure") {
      r.outcome = TransportFailure{j.value("http_status", 0), j.value("reason", std::string())};
    } else {
      throw Error(ErrorKind::Format, "unknown prediction outcome '" + outcome + "'");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("bad prediction line: ") + e.what());
  }
}

void write_predictions(const std::filesystem::path& path, const std::vector<PredictionResult>& results) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  for (const auto& r : results) out << prediction_line(r) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::vector<PredictionResult> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<PredictionResult> results;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      results.push_back(parse_prediction_line(line));
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + ":" + std::to_string(number) + ": " + e.detail());
    }
  }
  return results;
}

}  // namespace voxrep
