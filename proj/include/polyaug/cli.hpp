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

#ifndef POLYAUG_CLI_HPP
#define POLYAUG_CLI_HPP

// Command-line front end. `run_cli` is the whole program minus `main`, so
// tests can drive it with captured streams.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "polyaug/bench.hpp"
#include "polyaug/image_io.hpp"
#include "polyaug/label_io.hpp"
#include "polyaug/pipeline.hpp"
#include "polyaug/transforms.hpp"

namespace polyaug::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartialFailure = 1;
inline constexpr int kExitUsage = 2;

struct AugConfig {
  std::filesystem::path images_dir;
  std::filesystem::path labels_dir;
  std::filesystem::path out_dir;
  std::vector<TransformSpec> transforms;
  double threshold = 0.0;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool lenient = false;
  std::string suffix = "_aug";
};

struct FileResult {
  std::string stem;
  bool ok = false;
  std::size_t kept = 0;
  std::size_t dismissed = 0;
  std::string error;
};

inline TransformSpec combined_transform(const std::vector<TransformSpec>& specs) {
  if (specs.empty()) return TransformSpec::rotate(0.0);
  if (specs.size() == 1) return specs.front();
  return TransformSpec::sequence(specs);
}

inline FileResult augment_one(const AugConfig& cfg, const TransformSpec& transform,
                              const DatasetPair& pair) {
  FileResult r{pair.stem(), false, 0, 0, {}};
  try {
    const ImageBuffer image = read_image(pair.image_path);
    const LabelFile labels =
        pair.label_path ? read_label_file(*pair.label_path, {cfg.lenient}) : LabelFile{};
    std::mt19937_64 gen(derive_seed(cfg.seed, r.stem));
    const auto aug = resolve(transform, image.width(), image.height(), gen);
    const auto res = augment_pair(image, labels, aug, cfg.threshold);
    const std::string name = r.stem + cfg.suffix;
    write_png(cfg.out_dir / "images" / (name + ".png"), res.image);
    write_text_file(cfg.out_dir / "labels" / (name + ".txt"),
                    serialize_label_file(res.outcome.kept));
    r.kept = res.outcome.kept_ids.size();
    r.dismissed = res.outcome.dismissed.size();
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

/// Augments every image/label pair; failures are reported per file and do
/// not stop the run. Returns 0, or 1 when any file failed.
inline int cmd_augment(const AugConfig& cfg, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  if (!(cfg.threshold >= 0.0 && cfg.threshold <= 1.0)) {
    err << "error: --threshold must be in [0,1]\n";
    return kExitUsage;
  }
  if (cfg.jobs < 1) {
    err << "error: --jobs must be at least 1\n";
    return kExitUsage;
  }
  DatasetScan scan;
  try {
    scan = scan_dataset(cfg.images_dir, cfg.labels_dir);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const auto out_canon = fs::weakly_canonical(cfg.out_dir);
  for (const auto* dir : {&cfg.images_dir, &cfg.labels_dir}) {
    if (fs::weakly_canonical(*dir) == out_canon) {
      err << "error: --out must differ from the input directories\n";
      return kExitUsage;
    }
  }
  std::error_code ec;
  fs::create_directories(cfg.out_dir / "images", ec);
  if (!ec) fs::create_directories(cfg.out_dir / "labels", ec);
  if (ec) {
    err << "error: cannot create output directories: " << ec.message() << "\n";
    return kExitUsage;
  }
  for (const auto& w : scan.warnings) err << "warning: " << w << "\n";

  const TransformSpec transform = combined_transform(cfg.transforms);
  std::vector<FileResult> results(scan.pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scan.pairs.size(); i = next++) {
      results[i] = augment_one(cfg, transform, scan.pairs[i]);
    }
  };
  {
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs),
                                         std::max<std::size_t>(scan.pairs.size(), 1));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }

  std::size_t failed = 0, kept = 0, dismissed = 0;
  for (const auto& r : results) {
    if (r.ok) {
      out << r.stem << ": kept " << r.kept << ", dismissed " << r.dismissed << "\n";
      kept += r.kept;
      dismissed += r.dismissed;
    } else {
      ++failed;
      err << r.stem << ": failed: " << r.error << "\n";
    }
  }
  out << "summary: " << results.size() - failed << " files ok, " << failed << " failed; " << kept
      << " instances kept, " << dismissed << " dismissed\n";
  return failed == 0 ? kExitOk : kExitPartialFailure;
}

struct BenchConfig {
  SyntheticDatasetSpec dataset;
  std::vector<TransformSpec> transforms;
  std::vector<std::string> transform_texts;
  double threshold = 0.0;
  int repeats = 3;
  bool json = false;
};

inline int cmd_bench(const BenchConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.dataset.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!(cfg.threshold >= 0.0 && cfg.threshold <= 1.0)) {
    err << "error: --threshold must be in [0,1]\n";
    return kExitUsage;
  }
  std::string text;
  for (const auto& t : cfg.transform_texts) text += (text.empty() ? "" : " ") + t;
  const auto transform =
      cfg.transforms.empty() ? TransformSpec::vflip() : combined_transform(cfg.transforms);
  if (text.empty()) text = "vflip";

  try {
    const auto ds = generate_synthetic(cfg.dataset);
    const auto report =
        run_bench(ds, transform, {cfg.threshold, cfg.repeats, cfg.dataset.seed, text});
    if (cfg.json) {
      out << to_json(report).dump(2) << "\n";
    } else {
      out << to_table(report);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPartialFailure;
  }
  return kExitOk;
}

/// Parses `args` (without the program name) and runs the selected command.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  const CLI::Range kPositive(1, std::numeric_limits<int>::max());
  CLI::App app{"Geometric augmentation of polygon instance-segmentation labels", "polyaug"};
  app.require_subcommand(1);

  AugConfig aug;
  std::vector<std::string> aug_transforms;
  auto* augment = app.add_subcommand("augment", "Augment a YOLO-seg dataset");
  augment->add_option("--images", aug.images_dir, "Image directory")->required();
  augment->add_option("--labels", aug.labels_dir, "Label directory")->required();
  augment->add_option("--out", aug.out_dir, "Output directory")->required();
  augment->add_option("--transform", aug_transforms,
                      "vflip | hflip | rotate=DEG | rotate=LO..HI | crop=X0,Y0,W,H; repeat to chain");
  augment->add_option("--threshold", aug.threshold, "Minimum retained area fraction")
      ->check(CLI::Range(0.0, 1.0));
  augment->add_option("--seed", aug.seed, "Seed for ranged parameters");
  augment->add_option("--jobs", aug.jobs, "Worker threads")->check(kPositive);
  augment->add_flag("--lenient", aug.lenient, "Clamp out-of-range coordinates");
  augment->add_option("--suffix", aug.suffix, "Output file stem suffix");

  BenchConfig bench;
  auto* bench_cmd = app.add_subcommand("bench", "Compare the polygon and mask paths");
  bench_cmd->add_option("--n-images", bench.dataset.n_images)->check(kPositive);
  bench_cmd->add_option("--instances", bench.dataset.instances_per_image)
      ->check(kPositive);
  bench_cmd->add_option("--vertices", bench.dataset.vertices_per_instance)
      ->check(CLI::Range(3, std::numeric_limits<int>::max()));
  bench_cmd->add_option("--size", bench.dataset.image_size)->check(kPositive);
  bench_cmd->add_option("--seed", bench.dataset.seed);
  bench_cmd->add_option("--transform", bench.transform_texts, "Transform; repeat to chain");
  bench_cmd->add_option("--threshold", bench.threshold)->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--repeats", bench.repeats, "Timed repeats (best is kept)")
      ->check(kPositive);
  bench_cmd->add_flag("--json", bench.json, "Emit JSON");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (augment->parsed()) {
      for (const auto& t : aug_transforms) aug.transforms.push_back(parse_transform_spec(t));
      return cmd_augment(aug, out, err);
    }
    for (const auto& t : bench.transform_texts) bench.transforms.push_back(parse_transform_spec(t));
    return cmd_bench(bench, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace polyaug::cli

#endif  // POLYAUG_CLI_HPP
