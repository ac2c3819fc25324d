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

#ifndef POLYAUG_TESTS_TEST_SUPPORT_HPP
#define POLYAUG_TESTS_TEST_SUPPORT_HPP

// Independent reference computations and fixtures shared by the suites.
// Nothing here calls the library routine it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "polyaug/geometry.hpp"
#include "polyaug/label_io.hpp"

namespace polyaug::testing {

/// Even-odd ray casting.
inline bool point_in_polygon(const std::vector<Point2>& ring, double x, double y) {
  bool in = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const auto& a = ring[i];
    const auto& b = ring[j];
    if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

inline std::vector<Point2> ring_of(const Polygon& p) {
  return {p.vertices().begin(), p.vertices().end()};
}

/// Hit-or-miss estimate of the area enclosed by `ring` over its bounding box.
inline double monte_carlo_area(const std::vector<Point2>& ring, int samples, std::uint64_t seed) {
  double x0 = ring[0].x, x1 = ring[0].x, y0 = ring[0].y, y1 = ring[0].y;
  for (const auto& p : ring) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
  int hits = 0;
  for (int i = 0; i < samples; ++i) hits += point_in_polygon(ring, ux(gen), uy(gen)) ? 1 : 0;
  return (x1 - x0) * (y1 - y0) * hits / samples;
}

struct Bounds {
  double x0, y0, x1, y1;
};

inline Bounds scan_bounds(const std::vector<Point2>& ring) {
  Bounds b{ring[0].x, ring[0].y, ring[0].x, ring[0].y};
  for (const auto& p : ring) {
    if (p.x < b.x0) b.x0 = p.x;
    if (p.x > b.x1) b.x1 = p.x;
    if (p.y < b.y0) b.y0 = p.y;
    if (p.y > b.y1) b.y1 = p.y;
  }
  return b;
}

/// Convex polygon with `n` vertices on an ellipse of the given centre/radii.
inline std::vector<Point2> random_convex(std::mt19937_64& gen, int n, double cx, double cy,
                                         double rx, double ry) {
  std::uniform_real_distribution<double> jitter(0.1, 0.9);
  std::vector<Point2> ring;
  for (int k = 0; k < n; ++k) {
    const double t = 2 * std::numbers::pi * (k + jitter(gen)) / n;
    ring.push_back({cx + rx * std::cos(t), cy + ry * std::sin(t)});
  }
  return ring;
}

/// Star-shaped (hence simple) polygon: random radii at sorted angles.
inline std::vector<Point2> random_star(std::mt19937_64& gen, int n, double cx, double cy,
                                       double rmin, double rmax) {
  std::uniform_real_distribution<double> jitter(0.1, 0.9), radius(rmin, rmax);
  std::vector<Point2> ring;
  for (int k = 0; k < n; ++k) {
    const double t = 2 * std::numbers::pi * (k + jitter(gen)) / n;
    const double r = radius(gen);
    ring.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
  }
  return ring;
}

/// Random label file with convex instances fully inside the unit frame.
inline LabelFile random_labels(std::mt19937_64& gen, int instances, int min_vertices = 3,
                               int max_vertices = 24) {
  std::uniform_int_distribution<int> nv(min_vertices, max_vertices), cls(0, 79);
  std::uniform_real_distribution<double> r(0.03, 0.25), u(0.0, 1.0);
  LabelFile lf;
  for (int i = 0; i < instances; ++i) {
    const double rx = r(gen), ry = r(gen);
    const double cx = rx + (1 - 2 * rx) * u(gen), cy = ry + (1 - 2 * ry) * u(gen);
    lf.annotations.push_back({cls(gen), random_convex(gen, nv(gen), cx, cy, rx, ry)});
  }
  return lf;
}

/// Creates a unique empty directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 gen(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("polyaug_" + tag + "_" + std::to_string(gen()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace polyaug::testing

#endif  // POLYAUG_TESTS_TEST_SUPPORT_HPP
