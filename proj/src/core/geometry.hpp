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

#include <cstdint>
#include <optional>

#include "core/camera.hpp"
#include "core/tensor.hpp"

namespace sceneednet {

struct Point3 {
  double x = 0, y = 0, z = 0;
};

/// Image-space scene flow (u, v, d0, d1), each an [H,W] raster in pixels.
struct ImageSpaceFlow {
  TensorF u;
  TensorF v;
  TensorF d0;
  TensorF d1;
};

/// World-space scene flow. Axes: x right, y down (image rows), z forward.
/// Invalid pixels hold exactly (0, 0, 0).
struct SceneFlowField {
  TensorF flow;                 // [3,H,W]
  Tensor<std::uint8_t> valid;   // [H,W], 1 = valid

  std::size_t height() const { return flow.extent(1); }
  std::size_t width() const { return flow.extent(2); }
  std::size_t valid_count() const;
};

/// depth = fx * baseline / d. Non-positive or non-finite disparity yields
/// nullopt so callers can mask the pixel.
std::optional<double> disparity_to_depth(double disparity,
                                         const CameraIntrinsics& intr);

/// Inverse pinhole: X = (px - cx) Z / fx, Y = (py - cy) Z / fy.
Point3 backproject(double px, double py, double depth,
                   const CameraIntrinsics& intr);

struct BilinearSample {
  double value = 0;
  bool in_bounds = false;
};

/// Bilinear lookup in an [H,W] raster at column x, row y. Neighbours with
/// zero weight on an exact integer coordinate are not required to exist.
BilinearSample sample_bilinear(const TensorF& field, double x, double y);

/// Scene flow per pixel as the difference of the back-projected points at t
/// and t+1. d1 is sampled from `disp_t1` at the flow-displaced position, or,
/// for kDisparityChange, taken as d0 + disp_t1 at the same pixel.
SceneFlowField reconstruct_scene_flow(
    const TensorF& flow_u, const TensorF& flow_v, const TensorF& disp_t,
    const TensorF& disp_t1, const CameraIntrinsics& intr,
    NextDisparitySource source = NextDisparitySource::kNextFrame);

inline SceneFlowField reconstruct_scene_flow(const ImageSpaceFlow& f,
                                             const CameraIntrinsics& intr) {
  return reconstruct_scene_flow(f.u, f.v, f.d0, f.d1, intr);
}

}  // namespace sceneednet
