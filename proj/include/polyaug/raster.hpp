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

#ifndef POLYAUG_RASTER_HPP
#define POLYAUG_RASTER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyaug/error.hpp"
#include "polyaug/geometry.hpp"
#include "polyaug/label_io.hpp"
#include "polyaug/transforms.hpp"

namespace polyaug {

/// Row-major 8-bit raster with interleaved channels (1 = gray, 3 = RGB).
class ImageBuffer {
 public:
  ImageBuffer(int width, int height, int channels, std::uint8_t fill = 0)
      : width_(width), height_(height), channels_(channels) {
    check_shape();
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  ImageBuffer(int width, int height, int channels, std::vector<std::uint8_t> data)
      : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    check_shape();
    if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
      throw InvalidArgument("image data length does not match its shape");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  std::uint8_t& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  std::uint8_t at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  void check_shape() const {
    if (width_ < 1 || height_ < 1) throw InvalidArgument("image dimensions must be positive");
    if (channels_ != 1 && channels_ != 3) throw InvalidArgument("images have 1 or 3 channels");
  }
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_, height_, channels_;
  std::vector<std::uint8_t> data_;
};

/// One byte per pixel, 1 inside the instance and 0 outside.
class BinaryMask {
 public:
  BinaryMask(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw InvalidArgument("mask dimensions must be positive");
    bits_.assign(static_cast<std::size_t>(width) * height, 0);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::span<std::uint8_t> bits() noexcept { return bits_; }

  bool get(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool v = true) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
  }

  std::size_t count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_, height_;
  std::vector<std::uint8_t> bits_;
};

enum class Interpolation { kNearest, kBilinear };

namespace detail {

// Samples every destination pixel centre at its inverse-mapped source
// location. Pixel (i, j) covers [i, i+1) x [j, j+1).
inline void warp_plane(std::span<const std::uint8_t> src, int sw, int sh, int channels,
                       std::span<std::uint8_t> dst, int dw, int dh, const AffineMap& inv,
                       Interpolation interp, std::uint8_t fill) {
  const auto src_at = [&](long x, long y, int c) -> double {
    if (x < 0 || y < 0 || x >= sw || y >= sh) return fill;
    return src[(static_cast<std::size_t>(y) * sw + x) * channels + c];
  };

  for (int j = 0; j < dh; ++j) {
    const double cy = j + 0.5;
    std::uint8_t* row = dst.data() + static_cast<std::size_t>(j) * dw * channels;
    for (int i = 0; i < dw; ++i) {
      const double cx = i + 0.5;
      const double sx = inv.a * cx + inv.b * cy + inv.tx;
      const double sy = inv.c * cx + inv.d * cy + inv.ty;
      std::uint8_t* px = row + static_cast<std::size_t>(i) * channels;

      if (interp == Interpolation::kNearest) {
        const double fx = std::floor(sx), fy = std::floor(sy);
        if (fx < 0 || fy < 0 || fx >= sw || fy >= sh) {
          std::fill(px, px + channels, fill);
          continue;
        }
        const auto* s =
            src.data() + (static_cast<std::size_t>(fy) * sw + static_cast<std::size_t>(fx)) * channels;
        std::copy(s, s + channels, px);
        continue;
      }

      const double gx = sx - 0.5, gy = sy - 0.5;
      const double x0 = std::floor(gx), y0 = std::floor(gy);
      if (x0 < -1 || y0 < -1 || x0 >= sw || y0 >= sh) {
        std::fill(px, px + channels, fill);
        continue;
      }
      const double ax = gx - x0, ay = gy - y0;
      const long ix = static_cast<long>(x0), iy = static_cast<long>(y0);
      for (int c = 0; c < channels; ++c) {
        double v;
        if (ax == 0.0 && ay == 0.0) {
          v = src_at(ix, iy, c);
        } else {
          v = (1 - ax) * (1 - ay) * src_at(ix, iy, c) + ax * (1 - ay) * src_at(ix + 1, iy, c) +
              (1 - ax) * ay * src_at(ix, iy + 1, c) + ax * ay * src_at(ix + 1, iy + 1, c);
        }
        px[c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
}

inline void check_source(int w, int h, const AffineAugmentation& aug, const char* what) {
  if (w != aug.in_width() || h != aug.in_height()) {
    throw DimensionMismatch(std::string(what) + " is " + std::to_string(w) + "x" +
                            std::to_string(h) + " but the augmentation expects " +
                            std::to_string(aug.in_width()) + "x" + std::to_string(aug.in_height()));
  }
}

}  // namespace detail

inline ImageBuffer warp_image(const ImageBuffer& src, const AffineAugmentation& aug,
                              Interpolation interp = Interpolation::kBilinear,
                              std::uint8_t fill = 0) {
  detail::check_source(src.width(), src.height(), aug, "image");
  ImageBuffer dst(aug.out_width(), aug.out_height(), src.channels());
  detail::warp_plane(src.data(), src.width(), src.height(), src.channels(), dst.data(),
                     dst.width(), dst.height(), aug.map().inverse(), interp, fill);
  return dst;
}

/// Nearest-neighbour warp with zero fill, so the result stays binary.
inline BinaryMask warp_mask(const BinaryMask& src, const AffineAugmentation& aug) {
  detail::check_source(src.width(), src.height(), aug, "mask");
  BinaryMask dst(aug.out_width(), aug.out_height());
  detail::warp_plane(src.bits(), src.width(), src.height(), 1, dst.bits(), dst.width(),
                     dst.height(), aug.map().inverse(), Interpolation::kNearest, 0);
  return dst;
}

/// Even-odd scanline fill; pixel (i, j) is set iff (i + 0.5, j + 0.5) is inside.
inline BinaryMask rasterize_polygon(const Polygon& p, int w, int h) {
  BinaryMask mask(w, h);
  const auto verts = p.vertices();
  double ymin = verts[0].y, ymax = verts[0].y;
  for (const auto& v : verts) {
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  const int j_begin = static_cast<int>(std::clamp(std::ceil(ymin - 0.5), 0.0, double(h)));
  const int j_end = static_cast<int>(std::clamp(std::ceil(ymax - 0.5), 0.0, double(h)));

  std::vector<double> xs;
  xs.reserve(verts.size());
  auto bits = mask.bits();
  for (int j = j_begin; j < j_end; ++j) {
    const double y = j + 0.5;
    xs.clear();
    for (std::size_t k = 0, prev = verts.size() - 1; k < verts.size(); prev = k++) {
      const Point2& a = verts[prev];
      const Point2& b = verts[k];
      if ((a.y <= y) != (b.y <= y)) xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const double lo = std::clamp(std::ceil(xs[k] - 0.5), 0.0, double(w));
      const double hi = std::clamp(std::ceil(xs[k + 1] - 0.5), 0.0, double(w));
      const auto row = static_cast<std::size_t>(j) * w;
      std::fill(bits.begin() + row + static_cast<std::size_t>(lo),
                bits.begin() + row + static_cast<std::size_t>(std::max(lo, hi)), std::uint8_t{1});
    }
  }
  return mask;
}

/// |a AND b| / |a OR b|; two empty masks are considered identical.
inline double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionMismatch("mask_iou needs masks of equal size");
  }
  std::size_t inter = 0, uni = 0;
  const auto ab = a.bits();
  const auto bb = b.bits();
  for (std::size_t i = 0; i < ab.size(); ++i) {
    inter += ab[i] & bb[i];
    uni += ab[i] | bb[i];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// Scales normalized vertices to a `w`x`h` pixel frame.
inline Polygon to_pixels(const PolygonAnnotation& ann, int w, int h) {
  std::vector<Point2> px;
  px.reserve(ann.vertices.size());
  for (const auto& v : ann.vertices) px.push_back({v.x * w, v.y * h});
  return Polygon(std::move(px));
}

// ---------------------------------------------------------------------------
// Mask-based reference path: rasterize, warp every mask, count pixels.

struct OracleOutcome {
  ImageBuffer image;
  std::vector<BinaryMask> masks;          // kept masks, in input order
  std::vector<std::size_t> kept_ids;      // instance ids parallel to `masks`
  std::vector<std::pair<std::size_t, double>> dismissed;  // (instance id, ratio)
};

/// A mask is kept iff some pixel survives the warp and
/// warped_count / (|det| * source_count) >= threshold.
inline OracleOutcome oracle_augment(const ImageBuffer& image, const LabelFile& lf,
                                    const AffineAugmentation& aug, double threshold,
                                    Interpolation interp = Interpolation::kBilinear) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidArgument("threshold must be in [0,1]");
  OracleOutcome out{warp_image(image, aug, interp, 0), {}, {}, {}};
  const double scale = std::abs(aug.map().det());
  for (std::size_t id = 0; id < lf.annotations.size(); ++id) {
    const BinaryMask src = rasterize_polygon(to_pixels(lf.annotations[id], image.width(),
                                                       image.height()),
                                             image.width(), image.height());
    BinaryMask warped = warp_mask(src, aug);
    const auto before = static_cast<double>(src.count());
    const auto after = static_cast<double>(warped.count());
    const double ratio = before > 0 ? std::min(1.0, after / (scale * before)) : 0.0;
    if (after > 0 && ratio >= threshold) {
      out.masks.push_back(std::move(warped));
      out.kept_ids.push_back(id);
    } else {
      out.dismissed.emplace_back(id, ratio);
    }
  }
  return out;
}

/// Bytes needed to store the labels as vertex arrays: 16 bytes per vertex
/// plus 8 bytes of per-instance header.
inline std::size_t annotation_bytes(const LabelFile& lf) noexcept {
  std::size_t total = 0;
  for (const auto& ann : lf.annotations) total += 2 * ann.vertices.size() * 8 + 8;
  return total;
}

/// One byte per pixel per mask.
inline std::size_t mask_bytes(std::span<const BinaryMask> masks) noexcept {
  std::size_t total = 0;
  for (const auto& m : masks) total += static_cast<std::size_t>(m.width()) * m.height();
  return total;
}

}  // namespace polyaug

#endif  // POLYAUG_RASTER_HPP
