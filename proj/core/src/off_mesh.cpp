#include "voxrep/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "voxrep/error.hpp"

namespace voxrep {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Non-empty, comment-stripped lines with their 1-based numbers.
std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_ws(line);
    if (!tokens.empty()) lines.push_back({number, std::move(tokens)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

long long parse_int(std::string_view tok, std::size_t line) {
  long long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    parse_error(line, "expected integer, got '" + std::string(tok) + "'");
  }
  return v;
}

double parse_double(std::string_view tok, std::size_t line) {
  // from_chars for double is missing in older libstdc++; strtod on a bounded copy.
  std::string copy(tok);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size() || !std::isfinite(v)) {
    parse_error(line, "expected number, got '" + copy + "'");
  }
  return v;
}

}  // namespace

Bounds3 mesh_bounds(const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw Error(ErrorKind::DegenerateMesh, "mesh has no vertices");
  Bounds3 b{mesh.vertices.front(), mesh.vertices.front()};
  for (const Vec3& v : mesh.vertices) {
    b.min = {std::min(b.min.x, v.x), std::min(b.min.y, v.y), std::min(b.min.z, v.z)};
    b.max = {std::max(b.max.x, v.x), std::max(b.max.y, v.y), std::max(b.max.z, v.z)};
  }
  return b;
}

TriangleMesh parse_off(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw Error(ErrorKind::Format, "empty file, missing OFF header");

  // Header: "OFF" alone, "OFF V F E", or the fused ModelNet form "OFFV F E".
  std::size_t cursor = 0;
  const Line& first = lines[cursor++];
  const std::string_view head = first.tokens.front();
  if (head.substr(0, 3) != "OFF") {
    throw Error(ErrorKind::Format, "line " + std::to_string(first.number) + ": missing OFF header");
  }
  std::vector<std::string_view> count_tokens;
  std::size_t count_line = first.number;
  if (head.size() > 3) count_tokens.push_back(head.substr(3));
  count_tokens.insert(count_tokens.end(), first.tokens.begin() + 1, first.tokens.end());
  if (count_tokens.empty()) {
    if (cursor >= lines.size()) throw Error(ErrorKind::Truncation, "missing counts line");
    count_tokens = lines[cursor].tokens;
    count_line = lines[cursor].number;
    ++cursor;
  }
  if (head.size() > 3 && !std::isdigit(static_cast<unsigned char>(head[3]))) {
    throw Error(ErrorKind::Format, "line " + std::to_string(first.number) + ": unsupported header '" +
                                       std::string(head) + "'");
  }
  if (count_tokens.size() < 2) parse_error(count_line, "counts line needs at least V and F");
  const long long n_vertices = parse_int(count_tokens[0], count_line);
  const long long n_faces = parse_int(count_tokens[1], count_line);
  if (count_tokens.size() >= 3) parse_int(count_tokens[2], count_line);  // edge count, validated then ignored
  if (n_vertices < 0 || n_faces < 0) parse_error(count_line, "negative element count");

  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(std::min<long long>(n_vertices, 1 << 24)));
  for (long long i = 0; i < n_vertices; ++i, ++cursor) {
    if (cursor >= lines.size()) {
      throw Error(ErrorKind::Truncation, "expected " + std::to_string(n_vertices) + " vertices, found " +
                                             std::to_string(i));
    }
    const Line& line = lines[cursor];
    if (line.tokens.size() < 3) parse_error(line.number, "vertex needs 3 coordinates");
    mesh.vertices.push_back({parse_double(line.tokens[0], line.number), parse_double(line.tokens[1], line.number),
                             parse_double(line.tokens[2], line.number)});
  }
  for (long long f = 0; f < n_faces; ++f, ++cursor) {
    if (cursor >= lines.size()) {
      throw Error(ErrorKind::Truncation, "expected " + std::to_string(n_faces) + " faces, found " +
                                             std::to_string(f));
    }
    const Line& line = lines[cursor];
    const long long n = parse_int(line.tokens[0], line.number);
    if (n < 3) parse_error(line.number, "face needs at least 3 vertices");
    if (static_cast<long long>(line.tokens.size()) < n + 1) {
      parse_error(line.number, "face declares " + std::to_string(n) + " vertices but lists fewer");
    }
    std::vector<std::uint32_t> idx;
    idx.reserve(static_cast<std::size_t>(n));
    for (long long k = 0; k < n; ++k) {
      const long long v = parse_int(line.tokens[static_cast<std::size_t>(k + 1)], line.number);
      if (v < 0 || v >= n_vertices) {
        throw Error(ErrorKind::Index, "line " + std::to_string(line.number) + ": vertex index " + std::to_string(v) +
                                          " out of range [0," + std::to_string(n_vertices) + ")");
      }
      idx.push_back(static_cast<std::uint32_t>(v));
    }
    for (std::size_t k = 1; k + 1 < idx.size(); ++k) mesh.triangles.push_back({idx[0], idx[k], idx[k + 1]});
  }
  return mesh;
}

TriangleMesh read_off(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_off(ss.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

std::string write_off(const TriangleMesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
  for (const Vec3& v : mesh.vertices) out << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  return out.str();
}

TriangleMesh normalize_mesh(const TriangleMesh& mesh) {
  const Bounds3 b = mesh_bounds(mesh);
  const double extent = std::max({b.max.x - b.min.x, b.max.y - b.min.y, b.max.z - b.min.z});
  if (!(extent > 0.0)) throw Error(ErrorKind::DegenerateMesh, "mesh has zero extent on every axis");
  const Vec3 c{(b.min.x + b.max.x) / 2, (b.min.y + b.max.y) / 2, (b.min.z + b.max.z) / 2};
  TriangleMesh out = mesh;
  for (Vec3& v : out.vertices) v = {(v.x - c.x) / extent, (v.y - c.y) / extent, (v.z - c.z) / extent};
  return out;
}

MeshLibrary load_modelnet_tree(const std::filesystem::path& root, const std::vector<std::string>& categories) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw Error(ErrorKind::Io, "not a directory: " + root.string());
  MeshLibrary library;
  std::vector<std::string> wanted = categories;
  if (wanted.empty()) {
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_directory()) wanted.push_back(entry.path().filename().string());
    }
    std::sort(wanted.begin(), wanted.end());
  }
  for (const auto& category : wanted) {
    const fs::path dir = root / category;
    if (!fs::is_directory(dir)) continue;
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".off") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) library[category].push_back(normalize_mesh(read_off(file)));
  }
  return library;
}

}  // namespace voxrep
