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

// Brute-force reference implementations used as test oracles.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "core/geometry.hpp"
#include "core/kernels.hpp"
#include "core/random.hpp"

namespace sceneednet::testing {

/// Direct summation over the zero-padded window. Accumulates
/// acc = fma(w, x, acc) starting from the bias, in-channel-major, then kernel
/// row, then kernel column, visiting padded taps too.
template <typename T>
Tensor<T> naive_conv(const Tensor<T>& x, const ConvParams<T>& p) {
  const std::size_t cin = x.extent(0), h = x.extent(1), w = x.extent(2);
  const std::size_t cout = p.weights.extent(0);
  const std::size_t oh = (h + 2 * p.pad - 3) / p.stride + 1;
  const std::size_t ow = (w + 2 * p.pad - 3) / p.stride + 1;
  Tensor<T> y({cout, oh, ow});
  for (std::size_t co = 0; co < cout; ++co) {
    for (std::size_t i = 0; i < oh; ++i) {
      for (std::size_t j = 0; j < ow; ++j) {
        T acc = p.bias[co];
        for (std::size_t ci = 0; ci < cin; ++ci) {
          for (std::size_t ky = 0; ky < 3; ++ky) {
            for (std::size_t kx = 0; kx < 3; ++kx) {
              const long yy = static_cast<long>(i * p.stride + ky) - static_cast<long>(p.pad);
              const long xx = static_cast<long>(j * p.stride + kx) - static_cast<long>(p.pad);
              T v = 0;
              if (yy >= 0 && xx >= 0 && yy < static_cast<long>(h) && xx < static_cast<long>(w)) {
                v = x.at(ci, static_cast<std::size_t>(yy), static_cast<std::size_t>(xx));
              }
              acc = std::fma(p.weights[((co * cin + ci) * 3 + ky) * 3 + kx], v, acc);
            }
          }
        }
        y.at(co, i, j) = acc;
      }
    }
  }
  return y;
}

/// Scalar per-pixel scene-flow reconstruction written straight from the
/// pinhole formulas, next-frame disparity sampled bilinearly.
inline SceneFlowField oracle_scene_flow(const TensorF& u, const TensorF& v, const TensorF& d0,
                                        const TensorF& d1, const CameraIntrinsics& c) {
  const std::size_t h = u.extent(0), w = u.extent(1);
  SceneFlowField out{TensorF({3, h, w}), Tensor<std::uint8_t>({h, w})};
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      const double px = static_cast<double>(j), py = static_cast<double>(i);
      const double disp0 = d0.at(i, j);
      if (!(disp0 > 0)) continue;
      const double xs = px + static_cast<double>(u.at(i, j));
      const double ys = py + static_cast<double>(v.at(i, j));
      if (!(xs >= 0 && ys >= 0 && xs <= static_cast<double>(w) - 1 &&
            ys <= static_cast<double>(h) - 1))
        continue;
      const double fx0 = std::floor(xs), fy0 = std::floor(ys);
      const double tx = xs - fx0, ty = ys - fy0;
      const auto x0 = static_cast<std::size_t>(fx0), y0 = static_cast<std::size_t>(fy0);
      const std::size_t x1 = tx > 0 ? x0 + 1 : x0, y1 = ty > 0 ? y0 + 1 : y0;
      const double top = (1 - tx) * d1.at(y0, x0) + tx * d1.at(y0, x1);
      const double bot = (1 - tx) * d1.at(y1, x0) + tx * d1.at(y1, x1);
      const double disp1 = (1 - ty) * top + ty * bot;
      if (!(disp1 > 0)) continue;
      const double z0 = c.fx * c.baseline / disp0;
      const double z1 = c.fx * c.baseline / disp1;
      const double X0 = (px - c.cx) * z0 / c.fx, Y0 = (py - c.cy) * z0 / c.fy;
      const double X1 = (xs - c.cx) * z1 / c.fx, Y1 = (ys - c.cy) * z1 / c.fy;
      out.flow.at(0, i, j) = static_cast<float>(X1 - X0);
      out.flow.at(1, i, j) = static_cast<float>(Y1 - Y0);
      out.flow.at(2, i, j) = static_cast<float>(z1 - z0);
      out.valid.at(i, j) = 1;
    }
  }
  return out;
}

template <typename T>
Tensor<T> random_tensor(const Shape& shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor<T> t(shape);
  for (auto& v : t.data()) v = static_cast<T>(rng.uniform(lo, hi));
  return t;
}

template <typename T>
ConvParams<T> random_conv(std::size_t cout, std::size_t cin, std::size_t stride, Rng& rng,
                          double scale = 1.0) {
  ConvParams<T> p{random_tensor<T>({cout, cin, 3, 3}, rng, -scale, scale),
                  std::vector<T>(cout), stride, 1};
  for (auto& b : p.bias) b = static_cast<T>(rng.uniform(-scale, scale));
  return p;
}

}  // namespace sceneednet::testing
