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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Thresholds are fixed here and never tuned at run time.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polyaug/alloc_tracking.hpp"
#include "polyaug/bench.hpp"
#include "polyaug/cli.hpp"
#include "polyaug/pipeline.hpp"
#include "test_support.hpp"

POLYAUG_INSTALL_COUNTING_ALLOCATOR()

namespace polyaug::acceptance {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kMaxSpaceRatio = 0.05;
constexpr double kMaxSpaceCheckSeconds = 30.0;
constexpr double kMinOracleIou = 0.95;
constexpr double kMinOracleIouFlips = 0.98;
constexpr double kMaxOracleSeconds = 60.0;
constexpr double kLabelTolerance = 1e-6;
constexpr double kAreaLawTolerance = 1e-9;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool labels_near(const LabelFile& a, const LabelFile& b, double tol, double* worst) {
  if (a.annotations.size() != b.annotations.size()) return false;
  for (std::size_t i = 0; i < a.annotations.size(); ++i) {
    const auto& va = a.annotations[i].vertices;
    const auto& vb = b.annotations[i].vertices;
    if (a.annotations[i].class_id != b.annotations[i].class_id || va.size() != vb.size()) {
      return false;
    }
    for (std::size_t v = 0; v < va.size(); ++v) {
      *worst = std::max({*worst, std::abs(va[v].x - vb[v].x), std::abs(va[v].y - vb[v].y)});
    }
  }
  return *worst <= tol;
}

// Shared by the space and time criteria.
struct Table1Run {
  BenchReport report;
  double seconds = 0.0;
};

const Table1Run& table1_run() {
  static const Table1Run run = [] {
    const auto t0 = Clock::now();
    const auto ds = generate_synthetic({128, 8, 20, 640, 1});
    Table1Run r;
    r.report = run_bench(ds, TransformSpec::vflip(), {0.0, 3, 0, "vflip"});
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

Verdict space_ratio() {
  // Space only needs one pass over the dataset; time it on its own.
  const auto t0 = Clock::now();
  const auto ds = generate_synthetic({128, 8, 20, 640, 1});
  const auto r = run_bench(ds, TransformSpec::vflip(), {0.0, 1, 0, "vflip"});
  const double secs = seconds_since(t0);
  const double ratio = r.space_ratio();
  return {ratio <= kMaxSpaceRatio && secs < kMaxSpaceCheckSeconds && r.n_instances == 1024,
          fmt("polygon %zu B vs mask %zu B = %.4f%% (limit %.0f%%), %.1f s (limit %.0f s)",
              r.polygon.annotation_bytes, r.mask.annotation_bytes, 100 * ratio,
              100 * kMaxSpaceRatio, secs, kMaxSpaceCheckSeconds)};
}

Verdict time_direction() {
  const auto& run = table1_run();
  const auto& r = run.report;
  return {r.polygon.wall_time_s < r.mask.wall_time_s,
          fmt("best of 3: polygon %.3f s vs mask %.3f s; peak transient %lld B vs %lld B",
              r.polygon.wall_time_s, r.mask.wall_time_s,
              static_cast<long long>(r.polygon.peak_transient_bytes),
              static_cast<long long>(r.mask.peak_transient_bytes))};
}

Verdict threshold_scene() {
  // 200x100 frame; the crop keeps x >= 100.
  const ImageBuffer img(200, 100, 3, 128);
  LabelFile lf{{
      // x in [0.05, 0.55] -> [10, 110] px: 100 px wide, 10 px survive.
      {0, {{0.05, 0.2}, {0.55, 0.2}, {0.55, 0.6}, {0.05, 0.6}}},
      {1, {{0.6, 0.1}, {0.8, 0.1}, {0.7, 0.5}}},
      {2, {{0.7, 0.6}, {0.95, 0.6}, {0.95, 0.9}, {0.7, 0.9}}},
  }};
  const auto crop = make_crop(200, 100, 100, 0, 100, 100);
  const auto at0 = augment_pair(img, lf, crop, 0.0);
  const auto at20 = augment_pair(img, lf, crop, 0.2);
  const double ratio = at20.outcome.dismissed.empty() ? -1 : at20.outcome.dismissed[0].retention_ratio;
  const bool pass = at0.outcome.kept_ids == std::vector<std::size_t>{0, 1, 2} &&
                    at20.outcome.kept_ids == std::vector<std::size_t>{1, 2} &&
                    at20.outcome.dismissed.size() == 1 && at20.outcome.dismissed[0].instance_id == 0;
  return {pass, fmt("t=0 kept %zu/3, t=0.2 kept %zu/3, dismissed ratio %.4f",
                    at0.outcome.kept_ids.size(), at20.outcome.kept_ids.size(), ratio)};
}

Verdict zero_threshold_scene() {
  const auto ds = generate_synthetic({1, 3, 16, 320, 42});
  const auto& s = ds.samples[0];
  std::string detail;
  bool pass = true;
  const std::vector<std::pair<std::string, AffineAugmentation>> augs{
      {"vflip", make_vflip(320, 320)},
      {"crop", make_crop(320, 320, 60, 40, 200, 180)},
      {"rotate", make_rotate(320, 320, 30)}};
  for (const auto& [name, aug] : augs) {
    const auto res = augment_pair(s.image, s.labels, aug, 0.0);
    bool valid = true;
    for (const auto& ann : res.outcome.kept.annotations) {
      for (const auto& v : ann.vertices) valid &= v.x >= 0 && v.x <= 1 && v.y >= 0 && v.y <= 1;
    }
    try {
      valid &= parse_label_file(serialize_label_file(res.outcome.kept)).annotations.size() ==
               res.outcome.kept.annotations.size();
    } catch (const Error&) {
      valid = false;
    }
    const std::size_t kept = res.outcome.kept_ids.size();
    if (name == "vflip") pass &= kept == s.labels.annotations.size();
    pass &= valid;
    detail += fmt("%s kept %zu/3%s; ", name.c_str(), kept, valid ? "" : " INVALID");
  }
  return {pass, detail};
}

Verdict oracle_equivalence() {
  const auto t0 = Clock::now();
  constexpr int kSize = 512;
  std::mt19937_64 gen(2025);
  std::uniform_real_distribution<double> radius(25, 120), u(0, 1);
  std::uniform_int_distribution<int> nv(6, 32);
  LabelFile lf;
  for (int i = 0; i < 50; ++i) {
    const double rx = radius(gen), ry = radius(gen);
    const double cx = rx + 1 + (kSize - 2 * rx - 2) * u(gen);
    const double cy = ry + 1 + (kSize - 2 * ry - 2) * u(gen);
    auto ring = testing::random_convex(gen, nv(gen), cx, cy, rx, ry);
    for (auto& p : ring) p = {p.x / kSize, p.y / kSize};
    lf.annotations.push_back({i % 3, std::move(ring)});
  }
  const ImageBuffer img(kSize, kSize, 1);
  const int c0 = static_cast<int>(kSize * 0.2);
  const int cw = static_cast<int>(kSize * 0.6);
  const std::vector<std::tuple<std::string, AffineAugmentation, double>> cases{
      {"vflip", make_vflip(kSize, kSize), kMinOracleIouFlips},
      {"hflip", make_hflip(kSize, kSize), kMinOracleIouFlips},
      {"rotate30", make_rotate(kSize, kSize, 30), kMinOracleIou},
      {"crop60", make_crop(kSize, kSize, c0, c0, cw, cw), kMinOracleIou}};

  bool pass = true;
  std::string detail;
  for (const auto& [name, aug, limit] : cases) {
    const auto poly = augment_pair(img, lf, aug, 0.0, Interpolation::kNearest);
    const auto mask = oracle_augment(img, lf, aug, 0.0, Interpolation::kNearest);
    const BinaryMask empty(aug.out_width(), aug.out_height());
    std::map<std::size_t, const BinaryMask*> oracle;
    for (std::size_t k = 0; k < mask.kept_ids.size(); ++k) oracle[mask.kept_ids[k]] = &mask.masks[k];
    std::map<std::size_t, BinaryMask> ours;
    for (std::size_t k = 0; k < poly.outcome.kept_ids.size(); ++k) {
      ours.emplace(poly.outcome.kept_ids[k],
                   rasterize_polygon(to_pixels(poly.outcome.kept.annotations[k], aug.out_width(),
                                               aug.out_height()),
                                     aug.out_width(), aug.out_height()));
    }
    double worst = 1.0;
    for (std::size_t id = 0; id < lf.annotations.size(); ++id) {
      const auto* a = ours.contains(id) ? &ours.at(id) : &empty;
      const auto* b = oracle.contains(id) ? oracle.at(id) : &empty;
      worst = std::min(worst, mask_iou(*a, *b));
    }
    pass &= worst >= limit;
    detail += fmt("%s min IoU %.4f (>= %.2f); ", name.c_str(), worst, limit);
  }
  const double secs = seconds_since(t0);
  pass &= secs < kMaxOracleSeconds;
  detail += fmt("%.1f s", secs);
  return {pass, detail};
}

Verdict involution() {
  bool pass = true;
  double worst = 0.0;
  int image_mismatches = 0;
  for (int d = 0; d < 20; ++d) {
    const auto ds = generate_synthetic({3, 1 + d % 6, 3 + d, 96 + 8 * d, 500 + std::uint64_t(d)});
    for (const auto& s : ds.samples) {
      const auto f = make_vflip(s.image.width(), s.image.height());
      const auto once = augment_pair(s.image, s.labels, f, 0.0);
      const auto twice = augment_pair(once.image, once.outcome.kept, f, 0.0);
      pass &= labels_near(twice.outcome.kept, s.labels, kLabelTolerance, &worst);
      if (!(twice.image == s.image)) ++image_mismatches;
    }
  }
  pass &= image_mismatches == 0;
  return {pass, fmt("max label error %.2e (limit %.0e), image mismatches %d", worst,
                    kLabelTolerance, image_mismatches)};
}

Verdict partition_and_monotonicity() {
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> deg(-180, 180);
  std::uniform_int_distribution<int> off(0, 100);
  const std::vector<double> thresholds{0.0, 0.1, 0.2, 0.35, 0.5, 0.75, 0.9, 1.0};
  int scenes = 0, violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto lf = testing::random_labels(gen, 1 + trial % 12);
    const int w = 240, h = 180;
    const auto aug = compose({make_rotate(w, h, deg(gen)), make_crop(w, h, off(gen), off(gen) / 2, 120, 90)});
    const auto ks = transform_keypoints(yolo_to_keypoints(lf, w, h), aug);
    std::set<std::size_t> prev;
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      const auto out = keypoints_to_yolo(ks, aug.out_width(), aug.out_height(), thresholds[k]);
      std::set<std::size_t> kept(out.kept_ids.begin(), out.kept_ids.end());
      std::set<std::size_t> all = kept;
      for (const auto& dsm : out.dismissed) all.insert(dsm.instance_id);
      if (all.size() != lf.annotations.size() ||
          kept.size() + out.dismissed.size() != lf.annotations.size()) {
        ++violations;
      }
      if (k > 0 && !std::includes(prev.begin(), prev.end(), kept.begin(), kept.end())) ++violations;
      prev = std::move(kept);
    }
    ++scenes;
  }
  return {violations == 0, fmt("%d scenes x %zu thresholds, %d violations", scenes,
                               thresholds.size(), violations)};
}

Verdict affine_area_law() {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> coef(-4, 4);
  double worst = 0.0;
  int n = 0;
  while (n < 1000) {
    const AffineMap m{coef(gen), coef(gen), coef(gen), coef(gen), coef(gen), coef(gen)};
    if (std::abs(m.det()) < 1e-2) continue;
    const Polygon p(testing::random_star(gen, 5 + n % 20, coef(gen), coef(gen), 0.5, 3));
    const double expect = std::abs(m.det()) * polygon_area(p);
    worst = std::max(worst, std::abs(polygon_area(apply_affine(m, p)) - expect) / expect);
    ++n;
  }
  return {worst <= kAreaLawTolerance, fmt("%d maps, max relative error %.2e (limit %.0e)", n,
                                           worst, kAreaLawTolerance)};
}

Verdict label_round_trip() {
  std::mt19937_64 gen(7);
  double worst = 0.0;
  bool pass = true;
  for (int trial = 0; trial < 500; ++trial) {
    const auto lf = testing::random_labels(gen, trial % 15);
    const auto text = serialize_label_file(lf);
    const auto back = parse_label_file(text);
    pass &= labels_near(back, lf, kLabelTolerance, &worst);
    pass &= serialize_label_file(back) == text && serialize_label_file(lf) == text;
  }
  return {pass, fmt("500 files, max error %.2e (limit %.0e)", worst, kLabelTolerance)};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_text_file(e.path());
  }
  return files;
}

Verdict cli_determinism() {
  testing::TempDir tmp("acceptance_cli");
  fs::create_directories(tmp.path() / "images");
  fs::create_directories(tmp.path() / "labels");
  const auto ds = generate_synthetic({6, 4, 12, 160, 8});
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const std::string stem = "sample" + std::to_string(i);
    write_png(tmp.path() / "images" / (stem + ".png"), ds.samples[i].image);
    write_text_file(tmp.path() / "labels" / (stem + ".txt"),
                    serialize_label_file(ds.samples[i].labels));
  }
  auto run_once = [&](const std::string& out, const std::string& jobs) {
    std::ostringstream so, se;
    const int code = cli::run_cli({"augment", "--images", (tmp.path() / "images").string(),
                                   "--labels", (tmp.path() / "labels").string(), "--out",
                                   (tmp.path() / out).string(), "--transform", "rotate=-45..45",
                                   "--transform", "crop=10,10,120,120", "--threshold", "0.25",
                                   "--seed", "17", "--jobs", jobs},
                                  so, se);
    return std::make_pair(code, snapshot(tmp.path() / out));
  };
  const auto a = run_once("a", "1");
  const auto b = run_once("b", "1");
  const auto c = run_once("c", "3");
  const bool pass = a.first == 0 && b.first == 0 && c.first == 0 && a.second.size() == 12 &&
                    a.second == b.second && a.second == c.second;
  return {pass, fmt("%zu output files; runs identical: %s", a.second.size(),
                    a.second == b.second && a.second == c.second ? "yes" : "no")};
}

}  // namespace
}  // namespace polyaug::acceptance

int main() {
  using namespace polyaug::acceptance;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"space ratio (polygon <= 5% of mask bytes)", space_ratio},
      {"time direction (polygon faster than mask, best of 3)", time_direction},
      {"threshold scene (10% visible: kept at 0, dismissed at 0.2)", threshold_scene},
      {"zero-threshold scene (vflip/crop/rotate)", zero_threshold_scene},
      {"oracle equivalence (IoU vs warped masks)", oracle_equivalence},
      {"involution (vflip twice)", involution},
      {"invariant: partition + threshold monotonicity", partition_and_monotonicity},
      {"invariant: affine area law", affine_area_law},
      {"invariant: label parse/serialize round trip", label_round_trip},
      {"invariant: deterministic CLI outputs", cli_determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] AC%02d %s: %s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
