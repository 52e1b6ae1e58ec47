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

#include "core/geometry.hpp"

#include <cmath>

#include "core/parallel.hpp"

namespace sceneednet {

std::size_t SceneFlowField::valid_count() const {
  std::size_t n = 0;
  for (auto v : valid.data()) n += v != 0;
  return n;
}

std::optional<double> disparity_to_depth(double disparity,
                                         const CameraIntrinsics& intr) {
  if (!(disparity > 0) || !std::isfinite(disparity)) return std::nullopt;
  return intr.fx * intr.baseline / disparity;
}

Point3 backproject(double px, double py, double depth,
                   const CameraIntrinsics& intr) {
  return {(px - intr.cx) * depth / intr.fx, (py - intr.cy) * depth / intr.fy,
          depth};
}

BilinearSample sample_bilinear(const TensorF& field, double x, double y) {
  require_rank(field, 2, "sample_bilinear");
  const double h = static_cast<double>(field.extent(0));
  const double w = static_cast<double>(field.extent(1));
  if (!(x >= 0 && y >= 0 && x <= w - 1 && y <= h - 1)) return {0.0, false};
  const double x0f = std::floor(x), y0f = std::floor(y);
  const double tx = x - x0f, ty = y - y0f;
  const auto x0 = static_cast<std::size_t>(x0f), y0 = static_cast<std::size_t>(y0f);
  const std::size_t x1 = tx > 0 ? x0 + 1 : x0;
  const std::size_t y1 = ty > 0 ? y0 + 1 : y0;
  const double a = field.at(y0, x0), b = field.at(y0, x1);
  const double c = field.at(y1, x0), d = field.at(y1, x1);
  const double top = (1 - tx) * a + tx * b;
  const double bottom = (1 - tx) * c + tx * d;
  return {(1 - ty) * top + ty * bottom, true};
}

SceneFlowField reconstruct_scene_flow(const TensorF& flow_u,
                                      const TensorF& flow_v,
                                      const TensorF& disp_t,
                                      const TensorF& disp_t1,
                                      const CameraIntrinsics& intr,
                                      NextDisparitySource source) {
  intr.validate();
  require_rank(flow_u, 2, "reconstruct_scene_flow (flow_u)");
  const Shape& shape = flow_u.shape();
  const std::pair<const TensorF*, const char*> others[] = {
      {&flow_v, "flow_v"}, {&disp_t, "disp_t"}, {&disp_t1, "disp_t1"}};
  for (const auto& [t, name] : others) {
    if (t->shape() != shape) {
      throw ShapeError(name, std::string("reconstruct_scene_flow: ") + name +
                                 " shape " + shape_string(t->shape()) +
                                 " != flow_u shape " + shape_string(shape));
    }
  }
  const std::size_t h = shape[0], w = shape[1];
  SceneFlowField out{TensorF({3, h, w}), Tensor<std::uint8_t>({h, w})};

  parallel_for(h, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t i = r0; i < r1; ++i) {
      for (std::size_t j = 0; j < w; ++j) {
        const double px = static_cast<double>(j), py = static_cast<double>(i);
        const auto z0 = disparity_to_depth(disp_t.at(i, j), intr);
        if (!z0) continue;
        const double xs = px + static_cast<double>(flow_u.at(i, j));
        const double ys = py + static_cast<double>(flow_v.at(i, j));
        double d1 = 0;
        if (source == NextDisparitySource::kNextFrame) {
          const BilinearSample s = sample_bilinear(disp_t1, xs, ys);
          if (!s.in_bounds) continue;
          d1 = s.value;
        } else {
          const double wd = static_cast<double>(w) - 1, hd = static_cast<double>(h) - 1;
          if (!(xs >= 0 && ys >= 0 && xs <= wd && ys <= hd)) continue;
          d1 = static_cast<double>(disp_t.at(i, j)) + static_cast<double>(disp_t1.at(i, j));
        }
        const auto z1 = disparity_to_depth(d1, intr);
        if (!z1) continue;
        const Point3 p0 = backproject(px, py, *z0, intr);
        const Point3 p1 = backproject(xs, ys, *z1, intr);
        const float dx = static_cast<float>(p1.x - p0.x);
        const float dy = static_cast<float>(p1.y - p0.y);
        const float dz = static_cast<float>(p1.z - p0.z);
        if (!std::isfinite(dx) || !std::isfinite(dy) || !std::isfinite(dz)) continue;
        out.flow.at(0, i, j) = dx;
        out.flow.at(1, i, j) = dy;
        out.flow.at(2, i, j) = dz;
        out.valid.at(i, j) = 1;
      }
    }
  });
  return out;
}

}  // namespace sceneednet
