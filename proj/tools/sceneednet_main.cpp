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

// sceneednet command-line tool. Links only the C API.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sceneednet/sceneednet.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

int exit_code(sedn_status s) {
  switch (s) {
    case SEDN_OK:
      return kExitOk;
    case SEDN_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    case SEDN_ERR_SHAPE:
    case SEDN_ERR_PARSE:
    case SEDN_ERR_IO:
    case SEDN_ERR_DATA:
      return kExitData;
    default:
      return kExitInternal;
  }
}

int report(sedn_status s) {
  if (s != SEDN_OK) {
    std::fprintf(stderr, "error: %s: %s\n", sedn_status_name(s), sedn_last_error());
  }
  return exit_code(s);
}

void log_to_stderr(int level, const char* message, void*) {
  std::fprintf(stderr, "%s%s\n", level == 1 ? "warning: " : "", message);
}

// Checks that every required input exists before any work starts.
bool inputs_exist(const std::vector<std::pair<const char*, std::string>>& paths) {
  bool ok = true;
  for (const auto& [flag, p] : paths) {
    std::error_code ec;
    if (!std::filesystem::exists(p, ec)) {
      std::fprintf(stderr, "error: %s: no such file or directory: %s\n", flag, p.c_str());
      ok = false;
    }
  }
  return ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SceneEDNet scene-flow toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sedn_version()));

  std::string root, camera, out, checkpoint, split, val_root, val_split = "val";
  std::string left_t, right_t, left_t1, right_t1, pred_dir, gt_dir, field, valid, prefix;

  auto* make_gt = app.add_subcommand("make-gt", "Build scene-flow ground truth for a dataset tree");
  make_gt->add_option("--root", root, "Dataset root")->required();
  make_gt->add_option("--camera", camera, "Camera config file")->required();
  make_gt->add_option("--out", out, "Output directory")->required();

  sedn_train_options topt;
  sedn_train_options_init(&topt);
  double decay = 0;
  auto* train = app.add_subcommand("train", "Train a network from scratch");
  train->add_option("--root", root, "Dataset root")->required();
  train->add_option("--camera", camera, "Camera config file")->required();
  train->add_option("--out", out, "Output directory for checkpoints and train.log")->required();
  train->add_option("--epochs", topt.epochs, "Number of epochs")->capture_default_str();
  train->add_option("--lr", topt.lr, "Initial learning rate")->capture_default_str();
  train->add_option("--momentum", topt.momentum, "SGD momentum")->capture_default_str();
  auto* decay_opt = train->add_option("--decay", decay, "Learning-rate decay (default lr/epochs)");
  train->add_option("--batch", topt.batch, "Samples per step")->capture_default_str();
  train->add_option("--seed", topt.seed, "Initialization and shuffle seed")->capture_default_str();
  train->add_option("--split", split, "Training split directory")->default_str("train");
  train->add_option("--val-root", val_root, "Validation dataset root");
  train->add_option("--val-split", val_split, "Validation split directory")->capture_default_str();
  train->add_option("--checkpoint-every", topt.checkpoint_every,
                    "Also save epoch_NNNN.sedn every N epochs (0 = off)")
      ->capture_default_str();

  auto* infer = app.add_subcommand("infer", "Predict scene flow for one stereo frame pair");
  infer->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  infer->add_option("--left-t", left_t, "Left image at t")->required();
  infer->add_option("--right-t", right_t, "Right image at t")->required();
  infer->add_option("--left-t1", left_t1, "Left image at t+1")->required();
  infer->add_option("--right-t1", right_t1, "Right image at t+1")->required();
  infer->add_option("--out", out, "Output 3-channel PFM")->required();

  auto* eval = app.add_subcommand("eval", "Mean 3D end-point error");
  auto* eval_ckpt = eval->add_option("--checkpoint", checkpoint, "Checkpoint file");
  auto* eval_root = eval->add_option("--root", root, "Dataset root");
  auto* eval_cam = eval->add_option("--camera", camera, "Camera config file");
  eval->add_option("--split", split, "Split directory under --root")->default_str("test");
  auto* eval_pred = eval->add_option("--pred-dir", pred_dir, "Prediction tree");
  auto* eval_gt = eval->add_option("--gt-dir", gt_dir, "Ground-truth tree from make-gt");
  for (auto* o : {eval_ckpt, eval_root, eval_cam}) {
    o->excludes(eval_pred);
    o->excludes(eval_gt);
  }

  auto* colorize = app.add_subcommand("colorize", "Render a scene-flow PFM as per-axis PNGs");
  colorize->add_option("--field", field, "3-channel scene-flow PFM")->required();
  colorize->add_option("--out-prefix", prefix, "Writes <prefix>_x.png, _y.png, _z.png")
      ->required();
  colorize->add_option("--valid", valid, "Optional 1-channel validity PFM");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  sedn_set_log_callback(log_to_stderr, nullptr);

  if (make_gt->parsed()) {
    if (!inputs_exist({{"--root", root}, {"--camera", camera}})) return kExitData;
    size_t written = 0, failed = 0;
    const sedn_status s = sedn_make_gt(root.c_str(), camera.c_str(), out.c_str(), &written, &failed);
    if (s == SEDN_OK) std::printf("written=%zu failed=%zu\n", written, failed);
    return report(s);
  }

  if (train->parsed()) {
    if (!inputs_exist({{"--root", root}, {"--camera", camera}})) return kExitData;
    if (!val_root.empty() && !inputs_exist({{"--val-root", val_root}})) return kExitData;
    topt.root = root.c_str();
    topt.camera = camera.c_str();
    topt.out_dir = out.c_str();
    if (!split.empty()) topt.split = split.c_str();
    topt.val_root = val_root.empty() ? nullptr : val_root.c_str();
    topt.val_split = val_split.c_str();
    if (decay_opt->count() > 0) {
      topt.has_decay = 1;
      topt.decay = decay;
    }
    const auto t0 = std::chrono::steady_clock::now();
    double loss = 0;
    const sedn_status s = sedn_train(&topt, &loss);
    if (s == SEDN_OK) {
      std::fprintf(stderr, "train: %.1f s\n", seconds_since(t0));
      if (topt.epochs > 0) std::printf("final_train_loss=%.6f\n", loss);
    }
    return report(s);
  }

  if (infer->parsed()) {
    if (!inputs_exist({{"--checkpoint", checkpoint},
                       {"--left-t", left_t},
                       {"--right-t", right_t},
                       {"--left-t1", left_t1},
                       {"--right-t1", right_t1}}))
      return kExitData;
    const auto t0 = std::chrono::steady_clock::now();
    const sedn_status s = sedn_infer(checkpoint.c_str(), left_t.c_str(), right_t.c_str(),
                                     left_t1.c_str(), right_t1.c_str(), out.c_str());
    if (s == SEDN_OK) std::fprintf(stderr, "infer: %.3f s\n", seconds_since(t0));
    return report(s);
  }

  if (eval->parsed()) {
    double epe = 0;
    sedn_status s;
    if (!pred_dir.empty() || !gt_dir.empty()) {
      if (pred_dir.empty() || gt_dir.empty()) {
        std::fprintf(stderr, "error: eval needs both --pred-dir and --gt-dir\n");
        return kExitUsage;
      }
      if (!inputs_exist({{"--pred-dir", pred_dir}, {"--gt-dir", gt_dir}})) return kExitData;
      s = sedn_eval_dirs(pred_dir.c_str(), gt_dir.c_str(), &epe);
    } else {
      if (checkpoint.empty() || root.empty() || camera.empty()) {
        std::fprintf(stderr,
                     "error: eval needs --checkpoint, --root and --camera, "
                     "or --pred-dir and --gt-dir\n");
        return kExitUsage;
      }
      if (!inputs_exist({{"--checkpoint", checkpoint}, {"--root", root}, {"--camera", camera}}))
        return kExitData;
      s = sedn_eval_checkpoint(checkpoint.c_str(), root.c_str(), camera.c_str(),
                               split.empty() ? "test" : split.c_str(), &epe);
    }
    if (s == SEDN_OK) std::printf("epe=%.6f\n", epe);
    return report(s);
  }

  if (colorize->parsed()) {
    if (!inputs_exist({{"--field", field}})) return kExitData;
    if (!valid.empty() && !inputs_exist({{"--valid", valid}})) return kExitData;
    return report(sedn_colorize(field.c_str(), valid.empty() ? nullptr : valid.c_str(),
                                prefix.c_str()));
  }
  return kExitUsage;
}
