// Copyright 2026 The SceneEDNet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/workflows.hpp"

#include <algorithm>
#include <fstream>
#include <vector>

#include "core/colorize.hpp"
#include "core/log.hpp"
#include "core/pfm.hpp"

namespace sceneednet {
namespace fs = std::filesystem;
namespace {

std::vector<std::string> split_directories(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw DataError("dataset root not found: " + root.string());
  }
  std::vector<std::string> splits;
  for (const auto& entry : fs::directory_iterator(root, ec)) {
    if (entry.is_directory()) splits.push_back(entry.path().filename().string());
  }
  std::sort(splits.begin(), splits.end());
  return splits;
}

TensorF mask_to_tensor(const Tensor<std::uint8_t>& valid) {
  TensorF m({1, valid.extent(0), valid.extent(1)});
  for (std::size_t i = 0; i < valid.size(); ++i) m[i] = valid[i] ? 1.0f : 0.0f;
  return m;
}

Tensor<std::uint8_t> read_mask(const fs::path& path, std::size_t h, std::size_t w) {
  const PfmImage pfm = read_pfm_file(path);
  if (pfm.data.extent(0) != 1 || pfm.data.extent(1) != h || pfm.data.extent(2) != w) {
    throw ShapeError("valid", "mask " + path.string() + " has shape " +
                                  shape_string(pfm.data.shape()) + ", expected [1," +
                                  std::to_string(h) + "," + std::to_string(w) + "]");
  }
  Tensor<std::uint8_t> mask({h, w});
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = pfm.data[i] != 0.0f ? 1 : 0;
  return mask;
}

void write_log_line(std::ofstream& log, const fs::path& path, const std::string& line) {
  log << line << '\n';
  log.flush();
  if (!log) throw IoError("failed to write " + path.string());
}

}  // namespace

MakeGtReport make_ground_truth(const fs::path& root, const fs::path& camera_path,
                               const fs::path& out_dir) {
  const CameraConfig camera = load_camera_config(camera_path);
  MakeGtReport report;
  for (const std::string& split : split_directories(root)) {
    std::vector<SampleRecord> records;
    try {
      records = index_dataset(root, split);
    } catch (const DataError& e) {
      log_warning(e.what());
      continue;
    }
    for (const SampleRecord& rec : records) {
      try {
        const SceneFlowField gt = load_target(rec, camera);
        const fs::path base = out_dir / rec.split / rec.scene;
        const std::string name = rec.left_t.stem().string() + ".pfm";
        write_pfm_file(base / "scene_flow" / name, gt.flow);
        write_pfm_file(base / "valid" / name, mask_to_tensor(gt.valid));
        ++report.written;
      } catch (const Error& e) {
        log_warning(rec.split + "/" + rec.scene + " frame " + std::to_string(rec.frame) + ": " +
                    e.what());
        ++report.failed;
      }
    }
  }
  if (report.written == 0) {
    throw DataError("make-gt: no ground-truth fields written from " + root.string());
  }
  log_info("make-gt: wrote " + std::to_string(report.written) + " fields, " +
           std::to_string(report.failed) + " failed");
  return report;
}

FitResult run_training(const TrainJob& job) {
  job.config.validate();
  const CameraConfig camera = load_camera_config(job.camera);
  RecordSource train(index_dataset(job.root, job.split), camera);
  std::optional<RecordSource> val;
  if (!job.val_root.empty()) val.emplace(index_dataset(job.val_root, job.val_split), camera);

  Network<float> net = build_network<float>(NetworkSpec::sceneednet(), job.config.seed);
  const fs::path model = job.out_dir / "model.sedn";
  if (job.config.epochs == 0) {
    save_checkpoint(model, net);
    return FitResult{{}, {}, OptimizerState::for_network(net)};
  }

  std::error_code ec;
  fs::create_directories(job.out_dir, ec);
  const fs::path log_path = job.out_dir / "train.log";
  std::ofstream log(log_path, std::ios::binary | std::ios::trunc);
  if (!log) throw IoError("cannot create " + log_path.string());

  FitHooks hooks;
  hooks.validation = val ? &*val : nullptr;
  hooks.checkpoint_dir = job.out_dir;
  hooks.on_epoch = [&](const std::string& line) {
    write_log_line(log, log_path, line);
    log_info(line);
  };
  FitResult result = fit(net, train, job.config, hooks);
  save_checkpoint(model, net, &result.optimizer.velocity);
  return result;
}

void infer_to_file(const fs::path& checkpoint, const fs::path& left_t, const fs::path& right_t,
                   const fs::path& left_t1, const fs::path& right_t1, const fs::path& out) {
  const Checkpoint cp = load_checkpoint(checkpoint);
  const TensorF input = load_network_input(left_t, right_t, left_t1, right_t1);
  write_pfm_file(out, forward(cp.network, input));
}

double evaluate_checkpoint(const fs::path& checkpoint, const fs::path& root,
                           const fs::path& camera_path, const std::string& split) {
  const Checkpoint cp = load_checkpoint(checkpoint);
  const CameraConfig camera = load_camera_config(camera_path);
  const RecordSource data(index_dataset(root, split), camera);
  return evaluate(cp.network, data);
}

double evaluate_directories(const fs::path& pred_dir, const fs::path& gt_dir) {
  std::error_code ec;
  if (!fs::is_directory(gt_dir, ec)) throw DataError("ground-truth directory not found: " + gt_dir.string());
  if (!fs::is_directory(pred_dir, ec)) throw DataError("prediction directory not found: " + pred_dir.string());

  std::vector<fs::path> gt_files;
  for (const auto& entry : fs::recursive_directory_iterator(gt_dir, ec)) {
    const fs::path& p = entry.path();
    if (entry.is_regular_file() && p.extension() == ".pfm" &&
        p.parent_path().filename() == "scene_flow") {
      gt_files.push_back(fs::relative(p, gt_dir));
    }
  }
  std::sort(gt_files.begin(), gt_files.end());
  if (gt_files.empty()) {
    throw DataError("no scene_flow/*.pfm files under " + gt_dir.string());
  }

  double sum = 0;
  std::size_t counted = 0;
  for (const fs::path& rel : gt_files) {
    const fs::path gt_path = gt_dir / rel;
    const fs::path pred_path = pred_dir / rel;
    if (!fs::is_regular_file(pred_path, ec)) {
      throw DataError("missing prediction " + pred_path.string());
    }
    SceneFlowField gt;
    gt.flow = read_pfm_file(gt_path).data;
    if (gt.flow.extent(0) != 3) throw DataError("ground truth must have 3 channels: " + gt_path.string());
    const std::size_t h = gt.flow.extent(1), w = gt.flow.extent(2);
    const fs::path mask_path = gt_path.parent_path().parent_path() / "valid" / rel.filename();
    gt.valid = fs::is_regular_file(mask_path, ec) ? read_mask(mask_path, h, w)
                                                  : Tensor<std::uint8_t>({h, w}, 1);
    if (gt.valid_count() == 0) {
      log_warning("skipping " + gt_path.string() + ": no valid pixels");
      continue;
    }
    const TensorF pred = read_pfm_file(pred_path).data;
    try {
      sum += epe_metric(pred, gt);
    } catch (const ShapeError& e) {
      throw ShapeError(e.axis(), pred_path.string() + ": " + e.what());
    }
    ++counted;
  }
  if (counted == 0) throw DataError("no ground-truth field with valid pixels under " + gt_dir.string());
  return sum / static_cast<double>(counted);
}

void colorize_field(const fs::path& field_path, const fs::path& out_prefix,
                    const fs::path& valid_path) {
  const TensorF field = read_pfm_file(field_path).data;
  if (field.extent(0) != 3) {
    throw DataError("colorize expects a 3-channel PFM: " + field_path.string());
  }
  std::optional<Tensor<std::uint8_t>> mask;
  if (!valid_path.empty()) mask = read_mask(valid_path, field.extent(1), field.extent(2));
  static constexpr const char* kSuffix[3] = {"_x.png", "_y.png", "_z.png"};
  for (std::size_t c = 0; c < 3; ++c) {
    const RgbImage img = colorize_channel(field, c, mask ? &*mask : nullptr);
    fs::path out = out_prefix;
    out += kSuffix[c];
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_png(out, img);
  }
}

}  // namespace sceneednet
