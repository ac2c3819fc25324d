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

#ifndef POLYAUG_BENCH_HPP
#define POLYAUG_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyaug/alloc_tracking.hpp"
#include "polyaug/label_io.hpp"
#include "polyaug/pipeline.hpp"
#include "polyaug/raster.hpp"
#include "polyaug/transforms.hpp"

namespace polyaug {

struct SyntheticDatasetSpec {
  int n_images = 128;
  int instances_per_image = 8;
  int vertices_per_instance = 20;
  int image_size = 640;
  std::uint64_t seed = 1;

  void validate() const {
    if (n_images < 1 || instances_per_image < 1 || image_size < 1) {
      throw InvalidArgument("synthetic dataset sizes must be positive");
    }
    if (vertices_per_instance < 3) throw InvalidArgument("instances need at least 3 vertices");
  }
};

struct Sample {
  ImageBuffer image;
  LabelFile labels;
};

struct SyntheticDataset {
  SyntheticDatasetSpec spec;
  std::vector<Sample> samples;
};

namespace detail {

inline PolygonAnnotation random_convex_instance(std::mt19937_64& gen, int vertices, int classes) {
  // Ellipse fully inside the unit frame; one vertex per angular stratum keeps
  // the angles sorted and distinct.
  const double rx = 0.05 + 0.15 * uniform01(gen);
  const double ry = 0.05 + 0.15 * uniform01(gen);
  const double cx = rx + (1.0 - 2.0 * rx) * uniform01(gen);
  const double cy = ry + (1.0 - 2.0 * ry) * uniform01(gen);
  const double phase = 2.0 * std::numbers::pi * uniform01(gen);
  PolygonAnnotation ann;
  ann.class_id = static_cast<int>(gen() % static_cast<std::uint64_t>(classes));
  ann.vertices.reserve(vertices);
  for (int k = 0; k < vertices; ++k) {
    const double t = phase + 2.0 * std::numbers::pi * (k + 0.1 + 0.8 * uniform01(gen)) / vertices;
    ann.vertices.push_back({std::clamp(cx + rx * std::cos(t), 0.0, 1.0),
                            std::clamp(cy + ry * std::sin(t), 0.0, 1.0)});
  }
  return ann;
}

}  // namespace detail

/// Flat-colour images with one tinted convex polygon per instance.
/// Deterministic for a given spec.
inline SyntheticDataset generate_synthetic(const SyntheticDatasetSpec& spec) {
  spec.validate();
  constexpr int kClasses = 3;
  static constexpr std::uint8_t kTint[kClasses][3] = {{220, 60, 40}, {40, 180, 70}, {50, 80, 210}};

  SyntheticDataset ds{spec, {}};
  ds.samples.reserve(spec.n_images);
  std::mt19937_64 gen(splitmix64(spec.seed));
  for (int n = 0; n < spec.n_images; ++n) {
    const auto bg = static_cast<std::uint8_t>(96 + gen() % 64);
    Sample s{ImageBuffer(spec.image_size, spec.image_size, 3, bg), {}};
    for (int k = 0; k < spec.instances_per_image; ++k) {
      auto ann = detail::random_convex_instance(gen, spec.vertices_per_instance, kClasses);
      const auto mask = rasterize_polygon(to_pixels(ann, spec.image_size, spec.image_size),
                                          spec.image_size, spec.image_size);
      const auto* tint = kTint[ann.class_id];
      for (int y = 0; y < spec.image_size; ++y) {
        for (int x = 0; x < spec.image_size; ++x) {
          if (!mask.get(x, y)) continue;
          for (int c = 0; c < 3; ++c) {
            s.image.at(x, y, c) = static_cast<std::uint8_t>((s.image.at(x, y, c) + tint[c]) / 2);
          }
        }
      }
      s.labels.annotations.push_back(std::move(ann));
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

struct PathReport {
  double wall_time_s = 0.0;           // best of the timed repeats
  std::size_t annotation_bytes = 0;   // output annotation storage
  std::int64_t peak_transient_bytes = 0;
  std::size_t kept_instances = 0;
};

struct BenchReport {
  PathReport polygon;
  PathReport mask;
  std::size_t n_images = 0;
  std::size_t n_instances = 0;
  double mean_vertices = 0.0;
  int image_size = 0;
  std::string transform;
  double threshold = 0.0;
  int repeats = 0;
  // Both paths kept the same instance ids for every image.
  bool same_kept = false;

  double space_ratio() const {
    return mask.annotation_bytes == 0
               ? 0.0
               : static_cast<double>(polygon.annotation_bytes) / mask.annotation_bytes;
  }
};

struct BenchOptions {
  double threshold = 0.0;
  int repeats = 3;
  std::uint64_t seed = 0;
  std::string transform_text = "vflip";
};

/// Times the keypoint pipeline and the mask oracle over the same
/// pre-loaded samples and the same resolved augmentations. Single-threaded.
inline BenchReport run_bench(const SyntheticDataset& ds, const TransformSpec& transform,
                             const BenchOptions& opts = {}) {
  if (ds.samples.empty()) throw InvalidArgument("benchmark dataset is empty");
  if (opts.repeats < 1) throw InvalidArgument("benchmark needs at least one repeat");
  using Clock = std::chrono::steady_clock;

  BenchReport report;
  report.n_images = ds.samples.size();
  report.image_size = ds.spec.image_size;
  report.transform = opts.transform_text;
  report.threshold = opts.threshold;
  report.repeats = opts.repeats;
  std::size_t vertices = 0;
  std::vector<AffineAugmentation> augs;
  augs.reserve(ds.samples.size());
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto& s = ds.samples[i];
    report.n_instances += s.labels.annotations.size();
    for (const auto& a : s.labels.annotations) vertices += a.vertices.size();
    std::mt19937_64 gen(derive_seed(opts.seed, std::to_string(i)));
    augs.push_back(resolve(transform, s.image.width(), s.image.height(), gen));
  }
  report.mean_vertices =
      report.n_instances == 0 ? 0.0 : static_cast<double>(vertices) / report.n_instances;

  std::vector<std::vector<std::size_t>> polygon_kept(ds.samples.size());
  std::vector<std::vector<std::size_t>> mask_kept(ds.samples.size());

  auto time_path = [&](PathReport& path, auto&& body) {
    path.wall_time_s = std::numeric_limits<double>::infinity();
    for (int r = 0; r < opts.repeats; ++r) {
      path.annotation_bytes = 0;
      path.kept_instances = 0;
      alloc::PeakScope scope;
      const auto t0 = Clock::now();
      for (std::size_t i = 0; i < ds.samples.size(); ++i) body(i, r == 0);
      const std::chrono::duration<double> dt = Clock::now() - t0;
      path.wall_time_s = std::min(path.wall_time_s, dt.count());
      path.peak_transient_bytes = std::max(path.peak_transient_bytes, scope.peak_bytes());
    }
  };

  time_path(report.polygon, [&](std::size_t i, bool record) {
    const auto& s = ds.samples[i];
    const auto res = augment_pair(s.image, s.labels, augs[i], opts.threshold);
    report.polygon.annotation_bytes += annotation_bytes(res.outcome.kept);
    report.polygon.kept_instances += res.outcome.kept_ids.size();
    if (record) polygon_kept[i] = res.outcome.kept_ids;
  });

  time_path(report.mask, [&](std::size_t i, bool record) {
    const auto& s = ds.samples[i];
    const auto res = oracle_augment(s.image, s.labels, augs[i], opts.threshold);
    report.mask.annotation_bytes += mask_bytes(res.masks);
    report.mask.kept_instances += res.kept_ids.size();
    if (record) mask_kept[i] = res.kept_ids;
  });

  report.same_kept = polygon_kept == mask_kept;
  return report;
}

inline nlohmann::json to_json(const BenchReport& r) {
  auto path = [](const PathReport& p) {
    return nlohmann::json{{"wall_time_s", p.wall_time_s},
                          {"annotation_bytes", p.annotation_bytes},
                          {"peak_transient_bytes", p.peak_transient_bytes},
                          {"kept_instances", p.kept_instances}};
  };
  return {{"dataset",
           {{"n_images", r.n_images},
            {"n_instances", r.n_instances},
            {"mean_vertices", r.mean_vertices},
            {"image_size", r.image_size}}},
          {"transform", r.transform},
          {"threshold", r.threshold},
          {"repeats", r.repeats},
          {"polygon", path(r.polygon)},
          {"mask", path(r.mask)},
          {"space_ratio", r.space_ratio()},
          {"same_kept", r.same_kept}};
}

inline std::string to_table(const BenchReport& r) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "dataset: %zu images, %zu instances, %.1f vertices/instance, %dx%d px\n",
                r.n_images, r.n_instances, r.mean_vertices, r.image_size, r.image_size);
  out += buf;
  std::snprintf(buf, sizeof buf, "transform: %s  threshold: %.3f  best of %d\n\n",
                r.transform.c_str(), r.threshold, r.repeats);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-8s %12s %18s %20s %8s\n", "path", "time (s)",
                "annotation bytes", "peak transient bytes", "kept");
  out += buf;
  for (const auto& [name, p] : {std::pair<const char*, const PathReport&>{"polygon", r.polygon},
                                std::pair<const char*, const PathReport&>{"mask", r.mask}}) {
    std::snprintf(buf, sizeof buf, "%-8s %12.4f %18zu %20lld %8zu\n", name, p.wall_time_s,
                  p.annotation_bytes, static_cast<long long>(p.peak_transient_bytes),
                  p.kept_instances);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "\nspace ratio (polygon/mask): %.4f%%  same kept: %s\n",
                100.0 * r.space_ratio(), r.same_kept ? "yes" : "no");
  out += buf;
  return out;
}

}  // namespace polyaug

#endif  // POLYAUG_BENCH_HPP
