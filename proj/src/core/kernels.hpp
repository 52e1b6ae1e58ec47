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

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "core/random.hpp"
#include "core/tensor.hpp"

namespace sceneednet {

inline constexpr std::size_t kKernelSize = 3;

/// 3x3 convolution parameters: weights [out_ch, in_ch, 3, 3], one bias per
/// output channel, symmetric zero padding.
template <typename T>
struct ConvParams {
  Tensor<T> weights;
  std::vector<T> bias;
  std::size_t stride = 1;
  std::size_t pad = 1;

  std::size_t out_channels() const { return weights.extent(0); }
  std::size_t in_channels() const { return weights.extent(1); }
};

template <typename T>
struct ConvGrads {
  Tensor<T> input;
  Tensor<T> weights;
  std::vector<T> bias;
};

/// Output extent of a 3x3 convolution along one axis.
std::size_t conv_output_extent(std::size_t extent, std::size_t stride,
                               std::size_t pad);

/// out[c,i,j] = bias[c] + sum over (in-channel, kernel row, kernel column),
/// accumulated in exactly that order.
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const ConvParams<T>& p);

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const ConvParams<T>& p,
                             const Tensor<T>& grad_out);

/// Nearest-neighbour 2x upsampling of a [C,H,W] map.
template <typename T>
Tensor<T> upsample2x_forward(const Tensor<T>& input);

/// Sums each 2x2 block of grad_out. Odd extents are rejected.
template <typename T>
Tensor<T> upsample2x_backward(const Tensor<T>& grad_out);

template <typename T>
Tensor<T> leaky_relu_forward(const Tensor<T>& input, double alpha);

/// Slope is 1 for x >= 0 (including exactly 0) and alpha otherwise.
template <typename T>
Tensor<T> leaky_relu_backward(const Tensor<T>& input, const Tensor<T>& grad_out,
                              double alpha);

/// Center crop; an odd surplus leaves the extra row/column at the bottom/right.
template <typename T>
Tensor<T> crop_center(const Tensor<T>& input, std::size_t target_h,
                      std::size_t target_w);

/// Adjoint of crop_center: zero-pads grad back to [C, source_h, source_w].
template <typename T>
Tensor<T> crop_center_backward(const Tensor<T>& grad, std::size_t source_h,
                               std::size_t source_w);

template <typename T>
Tensor<T> concat_channels(std::span<const Tensor<T>> tensors);

/// A differentiable map on double tensors for gradient checking.
template <typename Op>
concept DifferentiableOp = requires(const Op& op, const TensorD& x) {
  { op.forward(x) } -> std::convertible_to<TensorD>;
  { op.backward(x, x) } -> std::convertible_to<TensorD>;
};

template <typename Forward, typename Backward>
struct LambdaOp {
  Forward f;
  Backward b;
  TensorD forward(const TensorD& x) const { return f(x); }
  TensorD backward(const TensorD& x, const TensorD& g) const { return b(x, g); }
};

template <typename Forward, typename Backward>
LambdaOp<Forward, Backward> make_op(Forward f, Backward b) {
  return {std::move(f), std::move(b)};
}

/// Max over input elements of |analytic - numeric| / max(|analytic|,
/// |numeric|, 1e-8), where numeric is the central difference of the scalar
/// <op(x), r> for a fixed random projection r.
template <DifferentiableOp Op>
double gradcheck(const Op& op, const TensorD& input, double eps,
                 std::uint64_t seed = 0x9e3779b97f4a7c15ull) {
  if (!(eps > 0)) throw InvalidArgument("gradcheck: eps must be positive");
  const TensorD y = op.forward(input);
  Rng rng(seed);
  TensorD r(y.shape());
  for (auto& v : r.data()) v = rng.uniform(-1.0, 1.0);
  const TensorD analytic = op.backward(input, r);
  if (analytic.shape() != input.shape()) {
    throw ShapeError("gradient", "gradcheck: backward returned " +
                                     shape_string(analytic.shape()) +
                                     " for input " + shape_string(input.shape()));
  }
  auto project = [&](const TensorD& x) {
    const TensorD out = op.forward(x);
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += out[i] * r[i];
    return s;
  };
  double worst = 0.0;
  TensorD x = input;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + eps;
    const double plus = project(x);
    x[i] = orig - eps;
    const double minus = project(x);
    x[i] = orig;
    const double numeric = (plus - minus) / (2 * eps);
    const double a = analytic[i];
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(a - numeric) / denom);
  }
  return worst;
}

}  // namespace sceneednet
