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

// File-level pipelines behind the command-line tool.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "core/training.hpp"

namespace sceneednet {

struct MakeGtReport {
  std::size_t written = 0;
  std::size_t failed = 0;
};

/// Reconstructs ground truth for every split directory under `root`:
///   out/<split>/<scene>/scene_flow/<frame>.pfm  3-channel flow
///   out/<split>/<scene>/valid/<frame>.pfm       1-channel mask (1 or 0)
/// where <frame> is the stem of the left image at t. Records that fail to
/// load are logged and counted; zero successes is a DataError.
MakeGtReport make_ground_truth(const std::filesystem::path& root,
                               const std::filesystem::path& camera_path,
                               const std::filesystem::path& out_dir);

struct TrainJob {
  std::filesystem::path root;
  std::filesystem::path camera;
  std::filesystem::path out_dir;
  std::string split = "train";
  /// Optional validation dataset root, indexed with `val_split`.
  std::filesystem::path val_root;
  std::string val_split = "val";
  TrainConfig config;
};

/// Builds a network from `config.seed`, trains it, and writes
///   out/model.sedn, out/epoch_NNNN.sedn (at the checkpoint cadence) and
///   out/train.log (one line per epoch).
/// With zero epochs only the initial model.sedn is written.
FitResult run_training(const TrainJob& job);

/// Runs a checkpoint on one pair of stereo frames and writes a 3-channel PFM.
void infer_to_file(const std::filesystem::path& checkpoint,
                   const std::filesystem::path& left_t,
                   const std::filesystem::path& right_t,
                   const std::filesystem::path& left_t1,
                   const std::filesystem::path& right_t1,
                   const std::filesystem::path& out);

/// Mean 3D EPE of a checkpoint over root/<split>.
double evaluate_checkpoint(const std::filesystem::path& checkpoint,
                           const std::filesystem::path& root,
                           const std::filesystem::path& camera_path,
                           const std::string& split);

/// Mean 3D EPE between predictions and ground truth written by
/// make_ground_truth. Every gt_dir/**/scene_flow/X.pfm is compared with the
/// file at the same relative path under pred_dir, masked by the sibling
/// valid/X.pfm when present.
double evaluate_directories(const std::filesystem::path& pred_dir,
                            const std::filesystem::path& gt_dir);

/// Writes <prefix>_x.png, <prefix>_y.png and <prefix>_z.png. `valid_path`
/// optionally names a 1-channel mask PFM.
void colorize_field(const std::filesystem::path& field_path,
                    const std::filesystem::path& out_prefix,
                    const std::filesystem::path& valid_path = {});

}  // namespace sceneednet
