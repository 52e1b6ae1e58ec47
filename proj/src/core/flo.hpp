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

// Middlebury ".flo" optical flow, little-endian throughout:
//
//   bytes 0-3    float 202021.25 ("PIEH")
//   bytes 4-7    int32 width
//   bytes 8-11   int32 height
//   bytes 12-    (u, v) float32 pairs, row-major, top row first

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "core/tensor.hpp"

namespace sceneednet {

inline constexpr float kFloMagic = 202021.25f;

/// Returns [2,H,W]: channel 0 = u, channel 1 = v.
TensorF read_flo(std::string_view bytes);
std::string write_flo(const TensorF& flow);

TensorF read_flo_file(const std::filesystem::path& path);
void write_flo_file(const std::filesystem::path& path, const TensorF& flow);

}  // namespace sceneednet
