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

#include "core/kernels.hpp"

#include <algorithm>
#include <cstring>

#include "core/gemm.hpp"
#include "core/parallel.hpp"

namespace sceneednet {
namespace {

constexpr std::size_t kColumnBudgetBytes = std::size_t{48} << 20;

struct ConvGeometry {
  std::size_t cin, h, w, cout, oh, ow, stride, pad;
  std::size_t depth() const { return cin * kKernelSize * kKernelSize; }
  std::size_t pixels() const { return oh * ow; }
};

template <typename T>
ConvGeometry check_conv(const Tensor<T>& input, const ConvParams<T>& p,
                        const char* what) {
  require_rank(input, 3, what);
  const Tensor<T>& wt = p.weights;
  if (wt.rank() != 4 || wt.extent(2) != kKernelSize ||
      wt.extent(3) != kKernelSize) {
    throw ShapeError("kernel", std::string(what) +
                                   ": weights must be [out,in,3,3], got " +
                                   shape_string(wt.shape()));
  }
  if (input.extent(0) != wt.extent(1)) {
    throw ShapeError("channels",
                     std::string(what) + ": input has " +
                         std::to_string(input.extent(0)) +
                         " channels, weights expect " +
                         std::to_string(wt.extent(1)));
  }
  if (p.bias.size() != wt.extent(0)) {
    throw ShapeError("bias", std::string(what) + ": bias length " +
                                 std::to_string(p.bias.size()) + " != " +
                                 std::to_string(wt.extent(0)) +
                                 " output channels");
  }
  if (p.stride != 1 && p.stride != 2) {
    throw InvalidArgument(std::string(what) + ": stride must be 1 or 2, got " +
                          std::to_string(p.stride));
  }
  const std::size_t h = input.extent(1), w = input.extent(2);
  if (h + 2 * p.pad < kKernelSize) {
    throw ShapeError("height", std::string(what) + ": padded height " +
                                   std::to_string(h + 2 * p.pad) +
                                   " smaller than kernel");
  }
  if (w + 2 * p.pad < kKernelSize) {
    throw ShapeError("width", std::string(what) + ": padded width " +
                                  std::to_string(w + 2 * p.pad) +
                                  " smaller than kernel");
  }
  return {input.extent(0), h, w, wt.extent(0),
          conv_output_extent(h, p.stride, p.pad),
          conv_output_extent(w, p.stride, p.pad), p.stride, p.pad};
}

// Output rows per column tile, keeping the im2col buffer within budget.
std::size_t rows_per_tile(const ConvGeometry& g, std::size_t elem) {
  std::size_t per_row = g.depth() * g.ow * elem;
  return std::clamp<std::size_t>(kColumnBudgetBytes / std::max<std::size_t>(per_row, 1),
                                 1, g.oh);
}

// col[k, p] for output rows [row0, row0 + rows), k = (ci, ky, kx).
template <typename T>
void im2col(const T* in, const ConvGeometry& g, std::size_t row0,
            std::size_t rows, T* col) {
  const std::size_t pt = rows * g.ow;
  parallel_for(
      g.depth(),
      [&](std::size_t k0, std::size_t k1) {
        for (std::size_t k = k0; k < k1; ++k) {
          const std::size_t ci = k / 9, ky = (k / 3) % 3, kx = k % 3;
          const T* plane = in + ci * g.h * g.w;
          T* dst = col + k * pt;
          for (std::size_t r = 0; r < rows; ++r) {
            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>((row0 + r) * g.stride + ky) -
                                      static_cast<std::ptrdiff_t>(g.pad);
            T* out = dst + r * g.ow;
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) {
              std::fill(out, out + g.ow, T{0});
              continue;
            }
            const T* src = plane + iy * g.w;
            for (std::size_t ox = 0; ox < g.ow; ++ox) {
              const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * g.stride + kx) -
                                        static_cast<std::ptrdiff_t>(g.pad);
              out[ox] = (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w)) ? T{0} : src[ix];
            }
          }
        }
      },
      16);
}

// Scatter-add of col back into the input gradient, fixed (k, p) order per
// input channel.
template <typename T>
void col2im(const T* col, const ConvGeometry& g, std::size_t row0,
            std::size_t rows, T* grad_in) {
  const std::size_t pt = rows * g.ow;
  parallel_for(g.cin, [&](std::size_t c0, std::size_t c1) {
    for (std::size_t ci = c0; ci < c1; ++ci) {
      T* plane = grad_in + ci * g.h * g.w;
      for (std::size_t kk = 0; kk < 9; ++kk) {
        const std::size_t ky = kk / 3, kx = kk % 3;
        const T* src = col + (ci * 9 + kk) * pt;
        for (std::size_t r = 0; r < rows; ++r) {
          const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>((row0 + r) * g.stride + ky) -
                                    static_cast<std::ptrdiff_t>(g.pad);
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) continue;
          T* dst = plane + iy * g.w;
          const T* s = src + r * g.ow;
          for (std::size_t ox = 0; ox < g.ow; ++ox) {
            const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * g.stride + kx) -
                                      static_cast<std::ptrdiff_t>(g.pad);
            if (ix >= 0 && ix < static_cast<std::ptrdiff_t>(g.w)) dst[ix] += s[ox];
          }
        }
      }
    }
  });
}

template <typename T>
void require_rank3(const Tensor<T>& t, const char* what) {
  require_rank(t, 3, what);
}

}  // namespace

std::size_t conv_output_extent(std::size_t extent, std::size_t stride,
                               std::size_t pad) {
  return (extent + 2 * pad - kKernelSize) / stride + 1;
}

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const ConvParams<T>& p) {
  const ConvGeometry g = check_conv(input, p, "conv2d_forward");
  require_finite(input, "conv2d_forward");
  Tensor<T> out({g.cout, g.oh, g.ow});
  const std::size_t pixels = g.pixels();
  for (std::size_t c = 0; c < g.cout; ++c)
    std::fill(out.plane(c), out.plane(c) + pixels, p.bias[c]);

  const std::size_t tile_rows = rows_per_tile(g, sizeof(T));
  std::vector<T> col(g.depth() * tile_rows * g.ow);
  for (std::size_t row0 = 0; row0 < g.oh; row0 += tile_rows) {
    const std::size_t rows = std::min(tile_rows, g.oh - row0);
    const std::size_t pt = rows * g.ow;
    im2col(input.raw(), g, row0, rows, col.data());
    gemm<T>(g.cout, pt, g.depth(),
            {p.weights.raw(), static_cast<std::ptrdiff_t>(g.depth()), 1},
            {col.data(), static_cast<std::ptrdiff_t>(pt), 1},
            {out.raw() + row0 * g.ow, static_cast<std::ptrdiff_t>(pixels), 1},
            /*accumulate=*/true);
  }
  return out;
}

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const ConvParams<T>& p,
                             const Tensor<T>& grad_out) {
  const ConvGeometry g = check_conv(input, p, "conv2d_backward");
  const Shape expected{g.cout, g.oh, g.ow};
  if (grad_out.shape() != expected) {
    throw ShapeError("grad_out", "conv2d_backward: grad_out shape " +
                                     shape_string(grad_out.shape()) +
                                     " != forward output " +
                                     shape_string(expected));
  }
  const std::size_t pixels = g.pixels();
  ConvGrads<T> grads{Tensor<T>(input.shape()), Tensor<T>(p.weights.shape()),
                     std::vector<T>(g.cout, T{0})};
  for (std::size_t c = 0; c < g.cout; ++c) {
    const T* src = grad_out.plane(c);
    T s{0};
    for (std::size_t i = 0; i < pixels; ++i) s += src[i];
    grads.bias[c] = s;
  }

  const std::size_t tile_rows = rows_per_tile(g, sizeof(T));
  std::vector<T> col(g.depth() * tile_rows * g.ow);
  std::vector<T> grad_col(col.size());
  for (std::size_t row0 = 0; row0 < g.oh; row0 += tile_rows) {
    const std::size_t rows = std::min(tile_rows, g.oh - row0);
    const std::size_t pt = rows * g.ow;
    const T* gy = grad_out.raw() + row0 * g.ow;
    im2col(input.raw(), g, row0, rows, col.data());
    // dW[co, k] += sum_p dY[co, p] * col[k, p]
    gemm<T>(g.cout, g.depth(), pt,
            {gy, static_cast<std::ptrdiff_t>(pixels), 1},
            {col.data(), 1, static_cast<std::ptrdiff_t>(pt)},
            {grads.weights.raw(), static_cast<std::ptrdiff_t>(g.depth()), 1},
            /*accumulate=*/row0 != 0);
    // dcol[k, p] = sum_co W[co, k] * dY[co, p]
    gemm<T>(g.depth(), pt, g.cout,
            {p.weights.raw(), 1, static_cast<std::ptrdiff_t>(g.depth())},
            {gy, static_cast<std::ptrdiff_t>(pixels), 1},
            {grad_col.data(), static_cast<std::ptrdiff_t>(pt), 1},
            /*accumulate=*/false);
    col2im(grad_col.data(), g, row0, rows, grads.input.raw());
  }
  return grads;
}

template <typename T>
Tensor<T> upsample2x_forward(const Tensor<T>& input) {
  require_rank3(input, "upsample2x_forward");
  const std::size_t c = input.extent(0), h = input.extent(1), w = input.extent(2);
  Tensor<T> out({c, 2 * h, 2 * w});
  for (std::size_t ch = 0; ch < c; ++ch) {
    const T* src = input.plane(ch);
    T* dst = out.plane(ch);
    for (std::size_t i = 0; i < h; ++i) {
      T* row = dst + (2 * i) * (2 * w);
      for (std::size_t j = 0; j < w; ++j) row[2 * j] = row[2 * j + 1] = src[i * w + j];
      std::memcpy(row + 2 * w, row, 2 * w * sizeof(T));
    }
  }
  return out;
}

template <typename T>
Tensor<T> upsample2x_backward(const Tensor<T>& grad_out) {
  require_rank3(grad_out, "upsample2x_backward");
  const std::size_t c = grad_out.extent(0), h2 = grad_out.extent(1),
                    w2 = grad_out.extent(2);
  if (h2 % 2) throw ShapeError("height", "upsample2x_backward: odd height " + std::to_string(h2));
  if (w2 % 2) throw ShapeError("width", "upsample2x_backward: odd width " + std::to_string(w2));
  const std::size_t h = h2 / 2, w = w2 / 2;
  Tensor<T> out({c, h, w});
  for (std::size_t ch = 0; ch < c; ++ch) {
    const T* src = grad_out.plane(ch);
    T* dst = out.plane(ch);
    for (std::size_t i = 0; i < h; ++i) {
      const T* r0 = src + (2 * i) * w2;
      const T* r1 = r0 + w2;
      for (std::size_t j = 0; j < w; ++j)
        dst[i * w + j] = r0[2 * j] + r0[2 * j + 1] + r1[2 * j] + r1[2 * j + 1];
    }
  }
  return out;
}

namespace {
void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InvalidArgument("leaky_relu: alpha must satisfy 0 <= alpha < 1, got " +
                          std::to_string(alpha));
  }
}
}  // namespace

template <typename T>
Tensor<T> leaky_relu_forward(const Tensor<T>& input, double alpha) {
  check_alpha(alpha);
  const T a = static_cast<T>(alpha);
  Tensor<T> out = input;
  for (auto& v : out.data()) v = v >= T{0} ? v : a * v;
  return out;
}

template <typename T>
Tensor<T> leaky_relu_backward(const Tensor<T>& input, const Tensor<T>& grad_out,
                              double alpha) {
  check_alpha(alpha);
  if (input.shape() != grad_out.shape()) {
    throw ShapeError("grad_out", "leaky_relu_backward: shape " +
                                     shape_string(grad_out.shape()) + " != " +
                                     shape_string(input.shape()));
  }
  const T a = static_cast<T>(alpha);
  Tensor<T> out = grad_out;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (input[i] < T{0}) out[i] *= a;
  return out;
}

template <typename T>
Tensor<T> crop_center(const Tensor<T>& input, std::size_t target_h,
                      std::size_t target_w) {
  require_rank3(input, "crop_center");
  const std::size_t c = input.extent(0), h = input.extent(1), w = input.extent(2);
  if (target_h > h) throw ShapeError("height", "crop_center: target height " + std::to_string(target_h) + " exceeds " + std::to_string(h));
  if (target_w > w) throw ShapeError("width", "crop_center: target width " + std::to_string(target_w) + " exceeds " + std::to_string(w));
  const std::size_t top = (h - target_h) / 2, left = (w - target_w) / 2;
  Tensor<T> out({c, target_h, target_w});
  for (std::size_t ch = 0; ch < c; ++ch)
    for (std::size_t i = 0; i < target_h; ++i)
      std::memcpy(&out.at(ch, i, 0), &input.at(ch, top + i, left), target_w * sizeof(T));
  return out;
}

template <typename T>
Tensor<T> crop_center_backward(const Tensor<T>& grad, std::size_t source_h,
                               std::size_t source_w) {
  require_rank3(grad, "crop_center_backward");
  const std::size_t c = grad.extent(0), th = grad.extent(1), tw = grad.extent(2);
  if (th > source_h) throw ShapeError("height", "crop_center_backward: gradient height exceeds source");
  if (tw > source_w) throw ShapeError("width", "crop_center_backward: gradient width exceeds source");
  const std::size_t top = (source_h - th) / 2, left = (source_w - tw) / 2;
  Tensor<T> out({c, source_h, source_w});
  for (std::size_t ch = 0; ch < c; ++ch)
    for (std::size_t i = 0; i < th; ++i)
      std::memcpy(&out.at(ch, top + i, left), &grad.at(ch, i, 0), tw * sizeof(T));
  return out;
}

template <typename T>
Tensor<T> concat_channels(std::span<const Tensor<T>> tensors) {
  if (tensors.empty()) throw InvalidArgument("concat_channels: empty tensor list");
  std::size_t channels = 0;
  const std::size_t h = tensors[0].rank() == 3 ? tensors[0].extent(1) : 0;
  const std::size_t w = tensors[0].rank() == 3 ? tensors[0].extent(2) : 0;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    require_rank3(tensors[i], "concat_channels");
    if (tensors[i].extent(1) != h) {
      throw ShapeError("height", "concat_channels: tensor " + std::to_string(i) +
                                     " has height " + std::to_string(tensors[i].extent(1)) +
                                     ", expected " + std::to_string(h));
    }
    if (tensors[i].extent(2) != w) {
      throw ShapeError("width", "concat_channels: tensor " + std::to_string(i) +
                                    " has width " + std::to_string(tensors[i].extent(2)) +
                                    ", expected " + std::to_string(w));
    }
    channels += tensors[i].extent(0);
  }
  Tensor<T> out({channels, h, w});
  T* dst = out.raw();
  for (const auto& t : tensors) {
    std::memcpy(dst, t.raw(), t.size() * sizeof(T));
    dst += t.size();
  }
  return out;
}

#define SCENEEDNET_INSTANTIATE(T)                                                   \
  template Tensor<T> conv2d_forward(const Tensor<T>&, const ConvParams<T>&);        \
  template ConvGrads<T> conv2d_backward(const Tensor<T>&, const ConvParams<T>&,     \
                                        const Tensor<T>&);                          \
  template Tensor<T> upsample2x_forward(const Tensor<T>&);                          \
  template Tensor<T> upsample2x_backward(const Tensor<T>&);                         \
  template Tensor<T> leaky_relu_forward(const Tensor<T>&, double);                  \
  template Tensor<T> leaky_relu_backward(const Tensor<T>&, const Tensor<T>&, double); \
  template Tensor<T> crop_center(const Tensor<T>&, std::size_t, std::size_t);       \
  template Tensor<T> crop_center_backward(const Tensor<T>&, std::size_t, std::size_t); \
  template Tensor<T> concat_channels(std::span<const Tensor<T>>);

SCENEEDNET_INSTANTIATE(float)
SCENEEDNET_INSTANTIATE(double)
#undef SCENEEDNET_INSTANTIATE

}  // namespace sceneednet
