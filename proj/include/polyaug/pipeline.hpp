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

#ifndef POLYAUG_PIPELINE_HPP
#define POLYAUG_PIPELINE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "polyaug/error.hpp"
#include "polyaug/geometry.hpp"
#include "polyaug/label_io.hpp"
#include "polyaug/raster.hpp"
#include "polyaug/transforms.hpp"

namespace polyaug {

/// A polygon vertex flattened into an individually transformable point that
/// remembers which instance it belongs to and where in the ring it sits.
struct IdentifiedKeypoint {
  Point2 point;  // pixels
  std::size_t instance_id = 0;
  int class_id = 0;
  double original_area = 0.0;  // normalized units, before any transform
  std::size_t vertex_index = 0;

  friend bool operator==(const IdentifiedKeypoint&, const IdentifiedKeypoint&) = default;
};

struct KeypointSet {
  std::vector<IdentifiedKeypoint> keypoints;
  int image_width = 0;
  int image_height = 0;
};

struct DismissedInstance {
  std::size_t instance_id = 0;
  double retention_ratio = 0.0;

  friend bool operator==(const DismissedInstance&, const DismissedInstance&) = default;
};

struct AugmentationOutcome {
  LabelFile kept;  // normalized to the output frame
  std::vector<std::size_t> kept_ids;
  std::vector<double> kept_ratios;  // parallel to kept_ids
  std::vector<DismissedInstance> dismissed;
};

/// Renders the `ID_CLASS_AREA` keypoint name, e.g. "3_0_0.125000".
inline std::string format_keypoint_name(const IdentifiedKeypoint& kp) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "_%.6f", kp.original_area);
  return std::to_string(kp.instance_id) + "_" + std::to_string(kp.class_id) + buf;
}

inline KeypointSet yolo_to_keypoints(const LabelFile& lf, int width, int height) {
  if (width < 1 || height < 1) throw InvalidArgument("image dimensions must be positive");
  KeypointSet ks{{}, width, height};
  for (std::size_t id = 0; id < lf.annotations.size(); ++id) {
    const auto& ann = lf.annotations[id];
    if (ann.vertices.size() < 3) throw DegenerateInstance(id);
    const double area = std::abs(signed_area(ann.vertices));
    if (!(area > 0.0)) throw DegenerateInstance(id);
    for (std::size_t v = 0; v < ann.vertices.size(); ++v) {
      const auto& p = ann.vertices[v];
      ks.keypoints.push_back({{p.x * width, p.y * height}, id, ann.class_id, area, v});
    }
  }
  return ks;
}

inline KeypointSet transform_keypoints(const KeypointSet& ks, const AffineAugmentation& aug) {
  if (ks.image_width != aug.in_width() || ks.image_height != aug.in_height()) {
    throw DimensionMismatch("keypoints and augmentation disagree on the source frame");
  }
  KeypointSet out{ks.keypoints, aug.out_width(), aug.out_height()};
  for (auto& kp : out.keypoints) kp.point = aug.map()(kp.point);
  return out;
}

namespace detail {

struct InstanceSlot {
  int class_id = 0;
  std::vector<Point2> ring;
  std::vector<bool> seen;
};

inline std::vector<InstanceSlot> group_instances(const KeypointSet& ks) {
  std::vector<InstanceSlot> slots;
  for (const auto& kp : ks.keypoints) {
    if (kp.instance_id >= slots.size()) slots.resize(kp.instance_id + 1);
    auto& slot = slots[kp.instance_id];
    if (kp.vertex_index >= slot.ring.size()) {
      slot.ring.resize(kp.vertex_index + 1);
      slot.seen.resize(kp.vertex_index + 1, false);
    }
    if (slot.seen[kp.vertex_index]) {
      throw InvalidArgument("duplicate vertex " + std::to_string(kp.vertex_index) +
                            " for instance " + std::to_string(kp.instance_id));
    }
    slot.class_id = kp.class_id;
    slot.ring[kp.vertex_index] = kp.point;
    slot.seen[kp.vertex_index] = true;
  }
  for (std::size_t id = 0; id < slots.size(); ++id) {
    if (std::find(slots[id].seen.begin(), slots[id].seen.end(), false) != slots[id].seen.end()) {
      throw InvalidArgument("instance " + std::to_string(id) + " has missing vertices");
    }
  }
  return slots;
}

}  // namespace detail

/// Reassembles each instance from its keypoints (already in output pixels),
/// clips it to the output frame and keeps it iff the visible fraction of its
/// transformed area is at least `threshold`.
inline AugmentationOutcome keypoints_to_yolo(const KeypointSet& ks, int out_width, int out_height,
                                             double threshold) {
  if (out_width < 1 || out_height < 1) throw InvalidArgument("output dimensions must be positive");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidArgument("threshold must be in [0,1]");

  const Rect frame(0.0, 0.0, out_width, out_height);
  AugmentationOutcome out;
  const auto slots = detail::group_instances(ks);
  for (std::size_t id = 0; id < slots.size(); ++id) {
    const auto& slot = slots[id];
    if (slot.ring.size() < 3) {
      out.dismissed.push_back({id, 0.0});
      continue;
    }
    const double full = std::abs(signed_area(slot.ring));
    std::optional<Polygon> visible;
    double ratio = 0.0;
    if (full > 0.0) {
      visible = clip_to_rect(Polygon(slot.ring), frame);
      if (visible) ratio = std::clamp(polygon_area(*visible) / full, 0.0, 1.0);
    }
    if (!visible || ratio < threshold) {
      out.dismissed.push_back({id, ratio});
      continue;
    }
    PolygonAnnotation ann{slot.class_id, {}};
    ann.vertices.reserve(visible->size());
    for (const auto& v : visible->vertices()) {
      ann.vertices.push_back({std::clamp(v.x / out_width, 0.0, 1.0),
                              std::clamp(v.y / out_height, 0.0, 1.0)});
    }
    out.kept.annotations.push_back(std::move(ann));
    out.kept_ids.push_back(id);
    out.kept_ratios.push_back(ratio);
  }
  return out;
}

struct AugmentedPair {
  ImageBuffer image;
  AugmentationOutcome outcome;
};

/// Warps the image and carries the labels through the same map as keypoints.
inline AugmentedPair augment_pair(const ImageBuffer& image, const LabelFile& lf,
                                  const AffineAugmentation& aug, double threshold,
                                  Interpolation interp = Interpolation::kBilinear,
                                  std::uint8_t fill = 0) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidArgument("threshold must be in [0,1]");
  auto ks = transform_keypoints(yolo_to_keypoints(lf, image.width(), image.height()), aug);
  auto outcome = keypoints_to_yolo(ks, aug.out_width(), aug.out_height(), threshold);
  return {warp_image(image, aug, interp, fill), std::move(outcome)};
}

}  // namespace polyaug

#endif  // POLYAUG_PIPELINE_HPP
