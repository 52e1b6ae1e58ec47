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

#pragma once

#include <filesystem>
#include <string_view>

namespace sceneednet {

/// Pinhole intrinsics plus stereo baseline. fx, fy in pixels; baseline in
/// world units, which sets the unit of every depth and scene-flow value.
struct CameraIntrinsics {
  double fx = 0;
  double fy = 0;
  double cx = 0;
  double cy = 0;
  double baseline = 0;

  /// Throws InvalidArgument unless fx, fy, baseline > 0 and cx, cy finite.
  void validate() const;
};

/// Where the disparity at t+1 is read from.
enum class NextDisparitySource {
  /// Disparity raster of frame t+1, sampled at the flow-displaced position.
  kNextFrame,
  /// Same-pixel disparity-change raster: d1 = d0 + change.
  kDisparityChange,
};

/// Camera configuration file contents.
///
/// Format: UTF-8 "key = value" lines, '#' starts a comment. Required keys are
/// fx, fy, cx, cy and baseline. Optional keys:
///   negate_disparity = true|false   (files store negative disparities)
///   disparity_source = next_frame|change
struct CameraConfig {
  CameraIntrinsics intrinsics;
  bool negate_disparity = false;
  NextDisparitySource disparity_source = NextDisparitySource::kNextFrame;
};

CameraConfig parse_camera_config(std::string_view text);
CameraConfig load_camera_config(const std::filesystem::path& path);

}  // namespace sceneednet
