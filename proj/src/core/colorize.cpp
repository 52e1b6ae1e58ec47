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

#include "core/colorize.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace sceneednet {

Rgb diverging_color(double t) {
  if (!(t == t)) return kInvalidColor;
  t = std::clamp(t, -1.0, 1.0);
  const auto fade = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - std::abs(t))));
  if (t < 0) return {fade, fade, 255};
  return {255, fade, fade};
}

RgbImage colorize_channel(const TensorF& field, std::size_t c,
                          const Tensor<std::uint8_t>* valid) {
  require_rank(field, 3, "colorize");
  if (c >= field.extent(0)) {
    throw ShapeError("channels", "colorize: channel " + std::to_string(c) + " out of range");
  }
  const std::size_t h = field.extent(1), w = field.extent(2), n = h * w;
  if (valid && valid->shape() != Shape{h, w}) {
    throw ShapeError("valid", "colorize: mask " + shape_string(valid->shape()) +
                                  " does not match field " + shape_string(field.shape()));
  }
  const float* plane = field.raw() + c * n;
  auto is_valid = [&](std::size_t p) { return !valid || (*valid)[p] != 0; };

  double range = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (is_valid(p)) range = std::max(range, std::abs(static_cast<double>(plane[p])));
  }

  RgbImage img{w, h, std::vector<std::uint8_t>(n * 3)};
  for (std::size_t p = 0; p < n; ++p) {
    Rgb px = kInvalidColor;
    if (is_valid(p)) px = range > 0 ? diverging_color(plane[p] / range) : kMidGray;
    std::copy(px.begin(), px.end(), img.pixels.begin() + static_cast<std::ptrdiff_t>(p * 3));
  }
  return img;
}

}  // namespace sceneednet
