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

#ifndef POLYAUG_GEOMETRY_HPP
#define POLYAUG_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "polyaug/error.hpp"

namespace polyaug {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline bool is_finite(const Point2& p) noexcept {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

/// Closed ring of at least three finite vertices. Orientation is free and
/// self-intersection is not checked.
class Polygon {
 public:
  explicit Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) {
      throw InvalidArgument("polygon needs at least 3 vertices");
    }
    for (const auto& v : vertices_) {
      if (!is_finite(v)) throw InvalidArgument("polygon vertex is not finite");
    }
  }

  std::span<const Point2> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  std::vector<Point2> vertices_;
};

/// Row-major 2x3 matrix [[a, b, tx], [c, d, ty]].
struct AffineMap {
  double a = 1.0, b = 0.0, tx = 0.0;
  double c = 0.0, d = 1.0, ty = 0.0;

  static constexpr AffineMap identity() noexcept { return {}; }

  constexpr Point2 operator()(const Point2& p) const noexcept {
    return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty};
  }

  constexpr double det() const noexcept { return a * d - b * c; }

  /// `then(next)` applies *this first, then `next`.
  constexpr AffineMap then(const AffineMap& next) const noexcept {
    return {next.a * a + next.b * c, next.a * b + next.b * d, next.a * tx + next.b * ty + next.tx,
            next.c * a + next.d * c, next.c * b + next.d * d, next.c * tx + next.d * ty + next.ty};
  }

  AffineMap inverse() const {
    const double k = det();
    if (k == 0.0 || !std::isfinite(k)) throw InvalidArgument("affine map is not invertible");
    const double ia = d / k, ib = -b / k, ic = -c / k, id = a / k;
    return {ia, ib, -(ia * tx + ib * ty), ic, id, -(ic * tx + id * ty)};
  }

  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// Axis-aligned rectangle with x0 < x1 and y0 < y1.
class Rect {
 public:
  Rect(double x0, double y0, double x1, double y1) : x0_(x0), y0_(y0), x1_(x1), y1_(y1) {
    if (!(x0 < x1) || !(y0 < y1)) throw InvalidArgument("degenerate rectangle");
  }

  double x0() const noexcept { return x0_; }
  double y0() const noexcept { return y0_; }
  double x1() const noexcept { return x1_; }
  double y1() const noexcept { return y1_; }
  double width() const noexcept { return x1_ - x0_; }
  double height() const noexcept { return y1_ - y0_; }
  double area() const noexcept { return width() * height(); }

  friend bool operator==(const Rect&, const Rect&) = default;

 private:
  double x0_, y0_, x1_, y1_;
};

/// Signed shoelace sum; positive for counter-clockwise rings in a y-up frame.
inline double signed_area(std::span<const Point2> ring) noexcept {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    twice += ring[j].x * ring[i].y - ring[i].x * ring[j].y;
  }
  return 0.5 * twice;
}

inline double polygon_area(const Polygon& p) noexcept { return std::abs(signed_area(p.vertices())); }

inline Polygon apply_affine(const AffineMap& m, const Polygon& p) {
  std::vector<Point2> out;
  out.reserve(p.size());
  for (const auto& v : p.vertices()) out.push_back(m(v));
  return Polygon(std::move(out));
}

/// Tight bounds, or nullopt when the polygon has zero extent on either axis.
inline std::optional<Rect> polygon_bbox(const Polygon& p) {
  auto [xmin, xmax] = std::minmax_element(p.vertices().begin(), p.vertices().end(),
                                          [](const Point2& l, const Point2& r) { return l.x < r.x; });
  auto [ymin, ymax] = std::minmax_element(p.vertices().begin(), p.vertices().end(),
                                          [](const Point2& l, const Point2& r) { return l.y < r.y; });
  if (!(xmin->x < xmax->x) || !(ymin->y < ymax->y)) return std::nullopt;
  return Rect(xmin->x, ymin->y, xmax->x, ymax->y);
}

namespace detail {

inline constexpr double kClipEdgeTolerance = 1e-12;

enum class ClipEdge { kLeft, kRight, kTop, kBottom };

inline bool inside(const Point2& p, ClipEdge e, const Rect& r) noexcept {
  switch (e) {
    case ClipEdge::kLeft: return p.x >= r.x0() - kClipEdgeTolerance;
    case ClipEdge::kRight: return p.x <= r.x1() + kClipEdgeTolerance;
    case ClipEdge::kTop: return p.y >= r.y0() - kClipEdgeTolerance;
    case ClipEdge::kBottom: return p.y <= r.y1() + kClipEdgeTolerance;
  }
  return false;
}

// The crossing coordinate on the clip line is assigned exactly so that a
// second clip against the same rectangle sees every vertex as inside.
inline Point2 intersect(const Point2& p, const Point2& q, ClipEdge e, const Rect& r) noexcept {
  switch (e) {
    case ClipEdge::kLeft:
    case ClipEdge::kRight: {
      const double x = e == ClipEdge::kLeft ? r.x0() : r.x1();
      const double t = (x - p.x) / (q.x - p.x);
      return {x, p.y + t * (q.y - p.y)};
    }
    case ClipEdge::kTop:
    case ClipEdge::kBottom: {
      const double y = e == ClipEdge::kTop ? r.y0() : r.y1();
      const double t = (y - p.y) / (q.y - p.y);
      return {p.x + t * (q.x - p.x), y};
    }
  }
  return p;
}

inline void clip_against(const std::vector<Point2>& in, std::vector<Point2>& out, ClipEdge e,
                         const Rect& r) {
  out.clear();
  if (in.empty()) return;
  Point2 prev = in.back();
  bool prev_in = inside(prev, e, r);
  for (const auto& cur : in) {
    const bool cur_in = inside(cur, e, r);
    if (cur_in) {
      if (!prev_in) out.push_back(intersect(prev, cur, e, r));
      out.push_back(cur);
    } else if (prev_in) {
      out.push_back(intersect(prev, cur, e, r));
    }
    prev = cur;
    prev_in = cur_in;
  }
}

}  // namespace detail

/// Sutherland-Hodgman clip of `p` against `r`. Returns nullopt when nothing
/// with positive area survives. Concave inputs may keep zero-width bridges
/// along the rectangle border; they add no area.
inline std::optional<Polygon> clip_to_rect(const Polygon& p, const Rect& r) {
  std::vector<Point2> a(p.vertices().begin(), p.vertices().end());
  std::vector<Point2> b;
  b.reserve(a.size() + 4);
  for (auto e : {detail::ClipEdge::kLeft, detail::ClipEdge::kRight, detail::ClipEdge::kTop,
                 detail::ClipEdge::kBottom}) {
    detail::clip_against(a, b, e, r);
    std::swap(a, b);
    if (a.empty()) return std::nullopt;
  }
  // Drop consecutive duplicates produced by vertices lying on a clip line.
  a.erase(std::unique(a.begin(), a.end()), a.end());
  while (a.size() > 1 && a.front() == a.back()) a.pop_back();
  if (a.size() < 3 || signed_area(a) == 0.0) return std::nullopt;
  return Polygon(std::move(a));
}

}  // namespace polyaug

#endif  // POLYAUG_GEOMETRY_HPP
