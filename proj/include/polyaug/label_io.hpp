// Copyright 2026 The polyaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLYAUG_LABEL_IO_HPP
#define POLYAUG_LABEL_IO_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "polyaug/error.hpp"
#include "polyaug/geometry.hpp"

namespace polyaug {

/// One instance of a YOLO segmentation label: class id plus vertices in
/// normalized [0,1] image coordinates.
struct PolygonAnnotation {
  int class_id = 0;
  std::vector<Point2> vertices;

  Polygon polygon() const { return Polygon(vertices); }

  friend bool operator==(const PolygonAnnotation&, const PolygonAnnotation&) = default;
};

struct LabelFile {
  std::vector<PolygonAnnotation> annotations;

  friend bool operator==(const LabelFile&, const LabelFile&) = default;
};

struct ParseOptions {
  // Clamp out-of-range coordinates to [0,1] instead of rejecting the line.
  bool lenient = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
  auto ws = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) tokens.push_back(s.substr(i, j - i));
    i = j;
  }
  return tokens;
}

inline PolygonAnnotation parse_label_line(std::string_view line, std::size_t line_no,
                                          const ParseOptions& opts) {
  const auto tokens = split_ws(line);
  if (tokens.size() < 7) throw MalformedLine(line_no, "expected a class id and at least 3 vertices");
  if (tokens.size() % 2 == 0) throw MalformedLine(line_no, "odd number of coordinates");

  PolygonAnnotation ann;
  {
    const auto tok = tokens[0];
    unsigned long cls = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), cls);
    if (ec != std::errc() || ptr != tok.data() + tok.size() ||
        cls > static_cast<unsigned long>(std::numeric_limits<int>::max())) {
      throw MalformedLine(line_no, "class id '" + std::string(tok) + "' is not a non-negative integer");
    }
    ann.class_id = static_cast<int>(cls);
  }

  auto coordinate = [&](std::string_view tok) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw MalformedLine(line_no, "bad coordinate '" + std::string(tok) + "'");
    }
    if (v < 0.0 || v > 1.0) {
      if (!opts.lenient) {
        throw MalformedLine(line_no, "coordinate '" + std::string(tok) + "' outside [0,1]");
      }
      v = std::clamp(v, 0.0, 1.0);
    }
    return v;
  };

  ann.vertices.reserve((tokens.size() - 1) / 2);
  for (std::size_t i = 1; i + 1 < tokens.size(); i += 2) {
    ann.vertices.push_back({coordinate(tokens[i]), coordinate(tokens[i + 1])});
  }
  return ann;
}

}  // namespace detail

/// Parses YOLO-seg label text. Blank lines are skipped; line numbers in
/// errors are 1-based and count blank lines.
inline LabelFile parse_label_file(std::string_view text, const ParseOptions& opts = {}) {
  LabelFile lf;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto raw = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    const auto line = detail::trim(raw);
    if (line.empty()) continue;
    lf.annotations.push_back(detail::parse_label_line(line, line_no, opts));
  }
  return lf;
}

/// One line per annotation, coordinates with 6 decimals.
inline std::string serialize_label_file(const LabelFile& lf) {
  std::string out;
  char buf[64];
  for (const auto& ann : lf.annotations) {
    out += std::to_string(ann.class_id);
    for (const auto& v : ann.vertices) {
      // + 0.0 folds negative zero so it never prints as "-0.000000".
      std::snprintf(buf, sizeof buf, " %.6f %.6f", v.x + 0.0, v.y + 0.0);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("short write to " + path.string());
}

inline LabelFile read_label_file(const std::filesystem::path& path, const ParseOptions& opts = {}) {
  return parse_label_file(read_text_file(path), opts);
}

struct DatasetPair {
  std::filesystem::path image_path;
  // Absent when the image has no label file; treated as an empty LabelFile.
  std::optional<std::filesystem::path> label_path;

  std::string stem() const { return image_path.stem().string(); }
};

struct DatasetScan {
  std::vector<DatasetPair> pairs;
  std::vector<std::string> warnings;
};

inline bool is_image_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

/// Pairs `<stem>.{png,jpg,jpeg}` images with `<stem>.txt` labels, sorted by
/// image stem. Label files without an image become warnings.
inline DatasetScan scan_dataset(const std::filesystem::path& images_dir,
                                const std::filesystem::path& labels_dir) {
  namespace fs = std::filesystem;
  for (const auto* dir : {&images_dir, &labels_dir}) {
    if (!fs::is_directory(*dir)) throw DirectoryNotFound("not a directory: " + dir->string());
  }

  std::map<std::string, fs::path> images;
  DatasetScan scan;
  for (const auto& entry : fs::directory_iterator(images_dir)) {
    if (!entry.is_regular_file() || !is_image_extension(entry.path())) continue;
    auto [it, inserted] = images.emplace(entry.path().stem().string(), entry.path());
    if (!inserted) {
      // Keep the lexicographically smaller file name for determinism.
      const auto& other = entry.path();
      scan.warnings.push_back("duplicate image stem '" + it->first + "'");
      if (other.filename() < it->second.filename()) it->second = other;
    }
  }

  std::map<std::string, fs::path> labels;
  for (const auto& entry : fs::directory_iterator(labels_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    labels.emplace(entry.path().stem().string(), entry.path());
  }

  for (const auto& [stem, image] : images) {
    DatasetPair pair{image, std::nullopt};
    if (auto it = labels.find(stem); it != labels.end()) pair.label_path = it->second;
    scan.pairs.push_back(std::move(pair));
  }
  for (const auto& [stem, label] : labels) {
    if (!images.contains(stem)) scan.warnings.push_back("label without image: " + label.string());
  }
  std::sort(scan.warnings.begin(), scan.warnings.end());
  return scan;
}

}  // namespace polyaug

#endif  // POLYAUG_LABEL_IO_HPP
