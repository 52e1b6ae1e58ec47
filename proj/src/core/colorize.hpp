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

#include <array>
#include <cstdint>

#include "core/image_io.hpp"
#include "core/tensor.hpp"

namespace sceneednet {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kMidGray = {128, 128, 128};
inline constexpr Rgb kInvalidColor = {0, 0, 0};

/// Blue-white-red map of t in [-1, 1]: -1 blue, 0 white, +1 red. Values
/// outside the interval are clamped.
Rgb diverging_color(double t);

/// Renders channel `c` of a [C,H,W] field. The range is the channel's max
/// absolute value over valid pixels; a zero range gives uniform mid-gray.
/// `valid` is an optional [H,W] mask (nonzero = valid); invalid pixels are
/// black.
RgbImage colorize_channel(const TensorF& field, std::size_t c,
                          const Tensor<std::uint8_t>* valid = nullptr);

}  // namespace sceneednet
