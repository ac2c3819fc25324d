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

#ifndef POLYAUG_TRANSFORMS_HPP
#define POLYAUG_TRANSFORMS_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyaug/error.hpp"
#include "polyaug/geometry.hpp"

namespace polyaug {

inline constexpr double kMinAbsDeterminant = 1e-9;

/// A geometric augmentation: an invertible source-to-destination pixel map
/// plus the frame sizes on both sides.
class AffineAugmentation {
 public:
  AffineAugmentation(const AffineMap& map, int in_width, int in_height, int out_width,
                     int out_height)
      : map_(map),
        in_width_(in_width),
        in_height_(in_height),
        out_width_(out_width),
        out_height_(out_height) {
    if (in_width < 1 || in_height < 1 || out_width < 1 || out_height < 1) {
      throw InvalidArgument("augmentation frame sizes must be positive");
    }
    if (!(std::abs(map.det()) >= kMinAbsDeterminant)) {
      throw InvalidArgument("augmentation map is not invertible");
    }
  }

  const AffineMap& map() const noexcept { return map_; }
  int in_width() const noexcept { return in_width_; }
  int in_height() const noexcept { return in_height_; }
  int out_width() const noexcept { return out_width_; }
  int out_height() const noexcept { return out_height_; }

 private:
  AffineMap map_;
  int in_width_, in_height_, out_width_, out_height_;
};

inline AffineAugmentation make_identity(int w, int h) { return {AffineMap::identity(), w, h, w, h}; }

inline AffineAugmentation make_vflip(int w, int h) {
  return {AffineMap{1, 0, 0, 0, -1, static_cast<double>(h)}, w, h, w, h};
}

inline AffineAugmentation make_hflip(int w, int h) {
  return {AffineMap{-1, 0, static_cast<double>(w), 0, 1, 0}, w, h, w, h};
}

namespace detail {

// Exact values at quarter turns so that 90/180/270/360 produce integer maps.
inline void cos_sin_degrees(double degrees, double& c, double& s) {
  const double r = std::fmod(degrees, 360.0);
  const double q = r / 90.0;
  if (q == std::floor(q)) {
    static constexpr double kCos[] = {1, 0, -1, 0};
    static constexpr double kSin[] = {0, 1, 0, -1};
    const int k = ((static_cast<int>(q) % 4) + 4) % 4;
    c = kCos[k];
    s = kSin[k];
    return;
  }
  const double rad = r * std::numbers::pi / 180.0;
  c = std::cos(rad);
  s = std::sin(rad);
}

}  // namespace detail

/// Rotation by `degrees` about the image centre, keeping the canvas size.
/// Positive angles follow the standard rotation matrix applied to pixel
/// coordinates: with y pointing down, (cx + r, cy) moves to (cx, cy + r).
inline AffineAugmentation make_rotate(int w, int h, double degrees) {
  if (!std::isfinite(degrees)) throw InvalidArgument("rotation angle is not finite");
  double c = 1.0, s = 0.0;
  detail::cos_sin_degrees(degrees, c, s);
  const double cx = w / 2.0, cy = h / 2.0;
  const AffineMap m{c, -s, cx - c * cx + s * cy, s, c, cy - s * cx - c * cy};
  return {m, w, h, w, h};
}

inline AffineAugmentation make_crop(int w, int h, int x0, int y0, int cw, int ch) {
  if (x0 < 0 || y0 < 0 || cw < 1 || ch < 1 || x0 > w - cw || y0 > h - ch) {
    throw InvalidCrop("crop " + std::to_string(x0) + "," + std::to_string(y0) + "," +
                      std::to_string(cw) + "," + std::to_string(ch) + " exceeds " +
                      std::to_string(w) + "x" + std::to_string(h) + " frame");
  }
  return {AffineMap{1, 0, -static_cast<double>(x0), 0, 1, -static_cast<double>(y0)}, w, h, cw, ch};
}

/// Chains augmentations in application order.
inline AffineAugmentation compose(std::span<const AffineAugmentation> steps) {
  if (steps.empty()) throw InvalidArgument("cannot compose an empty transform sequence");
  AffineMap m = steps.front().map();
  for (std::size_t i = 1; i < steps.size(); ++i) {
    const auto& prev = steps[i - 1];
    const auto& cur = steps[i];
    if (cur.in_width() != prev.out_width() || cur.in_height() != prev.out_height()) {
      throw DimensionMismatch("transform step " + std::to_string(i) + " expects " +
                              std::to_string(cur.in_width()) + "x" +
                              std::to_string(cur.in_height()) + " but receives " +
                              std::to_string(prev.out_width()) + "x" +
                              std::to_string(prev.out_height()));
    }
    m = m.then(cur.map());
  }
  return {m, steps.front().in_width(), steps.front().in_height(), steps.back().out_width(),
          steps.back().out_height()};
}

inline AffineAugmentation compose(std::initializer_list<AffineAugmentation> steps) {
  return compose(std::span<const AffineAugmentation>(steps.begin(), steps.size()));
}

// ---------------------------------------------------------------------------
// Textual transform descriptions used by the command line.

/// Closed interval; lo == hi means a fixed value.
struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;

  bool fixed() const noexcept { return lo == hi; }
  friend bool operator==(const ParamRange&, const ParamRange&) = default;
};

struct CropParams {
  int x0 = 0, y0 = 0, width = 1, height = 1;
  friend bool operator==(const CropParams&, const CropParams&) = default;
};

struct TransformSpec {
  enum class Kind { kVFlip, kHFlip, kRotate, kCrop, kCompose };

  Kind kind = Kind::kVFlip;
  ParamRange degrees;
  CropParams crop;
  std::vector<TransformSpec> steps;

  static TransformSpec vflip() { return {Kind::kVFlip, {}, {}, {}}; }
  static TransformSpec hflip() { return {Kind::kHFlip, {}, {}, {}}; }
  static TransformSpec rotate(double lo, double hi) { return {Kind::kRotate, {lo, hi}, {}, {}}; }
  static TransformSpec rotate(double deg) { return rotate(deg, deg); }
  static TransformSpec crop_rect(int x0, int y0, int w, int h) {
    return {Kind::kCrop, {}, {x0, y0, w, h}, {}};
  }
  static TransformSpec sequence(std::vector<TransformSpec> steps) {
    if (steps.empty()) throw InvalidArgument("compose needs at least one step");
    return {Kind::kCompose, {}, {}, std::move(steps)};
  }

  friend bool operator==(const TransformSpec&, const TransformSpec&) = default;
};

namespace detail {

inline double parse_real(std::string_view tok, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw InvalidArgument("bad " + std::string(what) + " '" + std::string(tok) + "'");
  }
  return v;
}

inline int parse_int(std::string_view tok, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw InvalidArgument("bad " + std::string(what) + " '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace detail

/// Parses `vflip`, `hflip`, `rotate=DEG`, `rotate=LO..HI` or `crop=X0,Y0,W,H`.
inline TransformSpec parse_transform_spec(std::string_view text) {
  const auto eq = text.find('=');
  const auto name = text.substr(0, eq);
  const auto args = eq == std::string_view::npos ? std::string_view{} : text.substr(eq + 1);
  const bool has_args = eq != std::string_view::npos;

  if (name == "vflip" || name == "hflip") {
    if (has_args) throw InvalidArgument(std::string(name) + " takes no parameters");
    return name == "vflip" ? TransformSpec::vflip() : TransformSpec::hflip();
  }
  if (name == "rotate") {
    if (!has_args) throw InvalidArgument("rotate needs an angle, e.g. rotate=30");
    if (const auto dots = args.find(".."); dots != std::string_view::npos) {
      const double lo = detail::parse_real(args.substr(0, dots), "rotation angle");
      const double hi = detail::parse_real(args.substr(dots + 2), "rotation angle");
      if (lo > hi) throw InvalidArgument("rotation range is reversed");
      return TransformSpec::rotate(lo, hi);
    }
    return TransformSpec::rotate(detail::parse_real(args, "rotation angle"));
  }
  if (name == "crop") {
    int v[4];
    std::string_view rest = args;
    for (int i = 0; i < 4; ++i) {
      const auto comma = rest.find(',');
      if ((i < 3) == (comma == std::string_view::npos)) {
        throw InvalidArgument("crop needs X0,Y0,W,H");
      }
      v[i] = detail::parse_int(rest.substr(0, comma), "crop parameter");
      rest = i < 3 ? rest.substr(comma + 1) : std::string_view{};
    }
    if (v[2] < 1 || v[3] < 1 || v[0] < 0 || v[1] < 0) {
      throw InvalidArgument("crop origin must be non-negative and size positive");
    }
    return TransformSpec::crop_rect(v[0], v[1], v[2], v[3]);
  }
  throw InvalidArgument("unknown transform '" + std::string(text) + "'");
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-file seed so that results do not depend on processing order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stem) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : stem) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(seed) ^ h);
}

/// Instantiates `spec` for a `w`x`h` source, drawing ranged parameters from `gen`.
inline AffineAugmentation resolve(const TransformSpec& spec, int w, int h, std::mt19937_64& gen) {
  using Kind = TransformSpec::Kind;
  switch (spec.kind) {
    case Kind::kVFlip: return make_vflip(w, h);
    case Kind::kHFlip: return make_hflip(w, h);
    case Kind::kRotate: {
      double deg = spec.degrees.lo;
      if (!spec.degrees.fixed()) deg += uniform01(gen) * (spec.degrees.hi - spec.degrees.lo);
      return make_rotate(w, h, deg);
    }
    case Kind::kCrop:
      return make_crop(w, h, spec.crop.x0, spec.crop.y0, spec.crop.width, spec.crop.height);
    case Kind::kCompose: {
      std::vector<AffineAugmentation> steps;
      steps.reserve(spec.steps.size());
      int cw = w, ch = h;
      for (const auto& step : spec.steps) {
        steps.push_back(resolve(step, cw, ch, gen));
        cw = steps.back().out_width();
        ch = steps.back().out_height();
      }
      return compose(steps);
    }
  }
  throw InvalidArgument("unknown transform kind");
}

inline AffineAugmentation resolve(const TransformSpec& spec, int w, int h) {
  std::mt19937_64 gen(0);
  return resolve(spec, w, h, gen);
}

}  // namespace polyaug

#endif  // POLYAUG_TRANSFORMS_HPP
