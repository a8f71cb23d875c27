#include <cmath>
#include <optional>
#include <set>

#include "voxrep/error.hpp"
#include "voxrep/vlm_client.hpp"

namespace voxrep {

namespace {

std::string_view strip_fences(std::string_view text) {
  const auto open = text.find("```");
  if (open == std::string_view::npos) return text;
  auto body_start = text.find('\n', open);
  if (body_start == std::string_view::npos) return text.substr(open + 3);
  ++body_start;
  const auto close = text.find("```", body_start);
  return text.substr(body_start, close == std::string_view::npos ? std::string_view::npos : close - body_start);
}

// End (exclusive) of the bracketed span opening at `start`, honoring JSON strings.
std::optional<std::size_t> balanced_end(std::string_view text, std::size_t start) {
  int depth = 0;
  bool in_string = false, escaped = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '[' || c == '{') ++depth;
    else if (c == ']' || c == '}') {
      if (--depth == 0) return i + 1;
      if (depth < 0) return std::nullopt;
    }
  }
  return std::nullopt;
}

// Drops commas that directly precede a closing bracket, outside strings.
std::string remove_trailing_commas(std::string_view json) {
  std::string out;
  out.reserve(json.size());
  bool in_string = false, escaped = false;
  for (std::size_t i = 0; i < json.size(); ++i) {
    const char c = json[i];
    if (in_string) {
      out.push_back(c);
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    if (c == ',') {
      std::size_t j = i + 1;
      while (j < json.size() && std::isspace(static_cast<unsigned char>(json[j]))) ++j;
      if (j < json.size() && (json[j] == ']' || json[j] == '}')) continue;
    }
    out.push_back(c);
  }
  return out;
}

std::optional<nlohmann::json> locate_array(std::string_view text) {
  for (std::size_t pos = text.find('['); pos != std::string_view::npos; pos = text.find('[', pos + 1)) {
    const auto end = balanced_end(text, pos);
    if (!end) continue;
    auto parsed = nlohmann::json::parse(remove_trailing_commas(text.substr(pos, *end - pos)), nullptr, false);
    if (!parsed.is_discarded() && parsed.is_array()) return parsed;
  }
  return std::nullopt;
}

// Integer from a JSON number or numeric string; non-integral values round half-up.
std::optional<long long> coerce_integer(const nlohmann::json& v) {
  double d;
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number()) {
    d = v.get<double>();
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    char* end = nullptr;
    d = std::strtod(s.c_str(), &end);
    if (s.empty() || end == s.c_str()) return std::nullopt;
    while (*end && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (*end) return std::nullopt;
  } else {
    return std::nullopt;
  }
  if (!std::isfinite(d) || std::abs(d) > 1e15) return std::nullopt;
  return static_cast<long long>(std::floor(d + 0.5));
}

std::optional<std::string> coerce_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return std::nullopt;
}

}  // namespace

ParsedAnnotation tolerant_parse(std::string_view text, const GridDims& dims) {
  dims.validate();
  auto array = locate_array(strip_fences(text));
  if (!array) array = locate_array(text);
  if (!array) throw Error(ErrorKind::Parse, "no JSON array found");

  ParsedAnnotation out;
  out.annotation.dims = dims;
  std::set<std::string> ids;
  for (std::size_t k = 0; k < array->size(); ++k) {
    const auto& item = (*array)[k];
    const std::string where = "record " + std::to_string(k) + ": ";
    if (!item.is_object()) {
      out.dropped.push_back(where + "not an object");
      continue;
    }
    const auto field = [&](const char* name) -> const nlohmann::json* {
      auto it = item.find(name);
      return it == item.end() || it->is_null() ? nullptr : &*it;
    };
    ObjectRecord rec;
    const char* missing = nullptr;
    const nlohmann::json* f;
    if (!(f = field("id")) || !coerce_string(*f)) missing = "id";
    else rec.id = *coerce_string(*f);
    if (!missing) {
      if (!(f = field("color")) || !f->is_string()) missing = "color";
      else rec.color = f->get<std::string>();
    }
    if (!missing) {
      if (!(f = field("description")) || !f->is_string()) missing = "description";
      else rec.description = f->get<std::string>();
    }
    if (!missing) {
      std::optional<long long> count;
      if ((f = field("number_of_occupied_voxel"))) count = coerce_integer(*f);
      if (!count || *count < 0) missing = "number_of_occupied_voxel";
      else rec.number_of_occupied_voxel = *count;
    }
    bool was_clamped = false;
    if (!missing) {
      std::optional<long long> axes[3];
      if ((f = field("voxel_coords_center"))) {
        if (f->is_object()) {
          const char* names[3] = {"x", "y", "z"};
          for (int a = 0; a < 3; ++a) {
            if (auto it = f->find(names[a]); it != f->end()) axes[a] = coerce_integer(*it);
          }
        } else if (f->is_array() && f->size() == 3) {
          for (int a = 0; a < 3; ++a) axes[a] = coerce_integer((*f)[static_cast<std::size_t>(a)]);
        }
      }
      if (!axes[0] || !axes[1] || !axes[2]) {
        missing = "voxel_coords_center";
      } else {
        const int limits[3] = {dims.w, dims.h, dims.d};
        int values[3];
        for (int a = 0; a < 3; ++a) {
          const long long clamped = std::clamp<long long>(*axes[a], 0, limits[a] - 1);
          was_clamped |= clamped != *axes[a];
          values[a] = static_cast<int>(clamped);
        }
        rec.voxel_coords_center = {values[0], values[1], values[2]};
      }
    }
    if (missing) {
      out.dropped.push_back(where + "missing or invalid field '" + missing + "'");
      continue;
    }
    if (!ids.insert(rec.id).second) {
      out.dropped.push_back(where + "duplicate id '" + rec.id + "'");
      continue;
    }
    if (was_clamped) out.clamped.push_back(out.annotation.objects.size());
    out.annotation.objects.push_back(std::move(rec));
  }
  return out;
}

}  // namespace voxrep
