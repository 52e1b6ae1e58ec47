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

#include "core/network.hpp"

#include <cmath>

#include "core/random.hpp"

namespace sceneednet {

const char* layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConvDown: return "conv-down";
    case LayerKind::kConvSame: return "conv-same";
    case LayerKind::kUpConv: return "upconv";
    case LayerKind::kOutputConv: return "output-conv";
    case LayerKind::kCrop: return "crop";
  }
  return "unknown";
}

NetworkSpec NetworkSpec::sceneednet(double alpha) {
  using K = LayerKind;
  auto conv = [alpha](const char* name, K kind, std::size_t in, std::size_t out) {
    return LayerSpec{name, kind, in, out, kind != K::kOutputConv,
                     kind != K::kOutputConv ? alpha : 0.0};
  };
  NetworkSpec spec;
  spec.layers = {
      conv("conv0", K::kConvDown, 12, 64),
      conv("conv1", K::kConvDown, 64, 128),
      conv("conv1_1", K::kConvDown, 128, 256),
      conv("conv2", K::kConvDown, 256, 512),
      conv("conv2_1", K::kConvSame, 512, 1024),
      conv("conv3", K::kConvSame, 1024, 1024),
      conv("conv3_1", K::kUpConv, 1024, 512),
      conv("conv4", K::kUpConv, 512, 256),
      conv("conv4_1", K::kUpConv, 256, 128),
      conv("conv5", K::kUpConv, 128, 64),
      LayerSpec{"crop", K::kCrop, 64, 64, false, 0.0},
      conv("Output", K::kOutputConv, 64, 3),
  };
  return spec;
}

void NetworkSpec::validate() const {
  std::size_t down = 0, same = 0, up = 0, out = 0, crop = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    const std::string where = "network spec: layer '" + l.name + "'";
    if (l.in_ch == 0 || l.out_ch == 0) throw InvalidArgument(where + " has zero channels");
    if (i > 0 && l.in_ch != layers[i - 1].out_ch) {
      throw InvalidArgument(where + " expects " + std::to_string(l.in_ch) +
                            " channels but receives " + std::to_string(layers[i - 1].out_ch));
    }
    if (l.activation && !(l.alpha >= 0.0 && l.alpha < 1.0)) {
      throw InvalidArgument(where + " has leaky ReLU alpha outside [0, 1)");
    }
    switch (l.kind) {
      case LayerKind::kConvDown:
        if (up || same) throw InvalidArgument(where + ": downsampling after the bottleneck");
        if (down > 0 && l.out_ch != 2 * l.in_ch)
          throw InvalidArgument(where + ": encoder layers must double channels");
        ++down;
        break;
      case LayerKind::kConvSame:
        if (up) throw InvalidArgument(where + ": stride-1 layer inside the decoder");
        ++same;
        break;
      case LayerKind::kUpConv:
        if (2 * l.out_ch != l.in_ch)
          throw InvalidArgument(where + ": decoder layers must halve channels");
        ++up;
        break;
      case LayerKind::kOutputConv:
        if (i + 1 != layers.size()) throw InvalidArgument(where + ": output layer must be last");
        if (l.activation) throw InvalidArgument(where + ": output layer has no activation");
        ++out;
        break;
      case LayerKind::kCrop:
        if (l.in_ch != l.out_ch) throw InvalidArgument(where + ": crop cannot change channels");
        ++crop;
        break;
      default:
        throw InvalidArgument(where + ": unknown layer kind");
    }
  }
  if (layers.empty() || layers.front().in_ch != kInputChannels) {
    throw InvalidArgument("network spec: the first layer must take " +
                          std::to_string(kInputChannels) + " input channels");
  }
  if (down != 4 || same != 2 || up != 4 || out != 1 || crop != 1) {
    throw InvalidArgument("network spec: expected 4 down, 2 same, 4 up, 1 crop and 1 output layer");
  }
  if (layers.back().out_ch != 3) {
    throw InvalidArgument("network spec: output layer must produce 3 channels");
  }
}

std::size_t NetworkSpec::conv_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.is_conv();
  return n;
}

std::vector<LayerShape> layer_shapes(const NetworkSpec& spec, std::size_t in_h,
                                     std::size_t in_w) {
  spec.validate();
  const std::string first = spec.layers.front().name;
  if (in_h < kMinInputExtent) {
    throw ShapeError("height", "layer_shapes: input height " + std::to_string(in_h) +
                                   " is below 16, the extent collapses before the four "
                                   "stride-2 layers starting at '" + first + "' complete");
  }
  if (in_w < kMinInputExtent) {
    throw ShapeError("width", "layer_shapes: input width " + std::to_string(in_w) +
                                  " is below 16, the extent collapses before the four "
                                  "stride-2 layers starting at '" + first + "' complete");
  }
  std::vector<LayerShape> out;
  std::size_t h = in_h, w = in_w;
  for (const LayerSpec& l : spec.layers) {
    switch (l.kind) {
      case LayerKind::kCrop:
        if (h < in_h || w < in_w) {
          throw ShapeError(h < in_h ? "height" : "width",
                           "layer_shapes: decoder output smaller than input at '" + l.name + "'");
        }
        h = in_h;
        w = in_w;
        break;
      case LayerKind::kUpConv:
        h *= 2;
        w *= 2;
        break;
      default:
        h = conv_output_extent(h, l.stride(), 1);
        w = conv_output_extent(w, l.stride(), 1);
        break;
    }
    if (h == 0 || w == 0) {
      throw ShapeError(h == 0 ? "height" : "width",
                       "layer_shapes: spatial extent collapses to 0 at '" + l.name + "'");
    }
    out.push_back({l.name, l.out_ch, h, w});
  }
  return out;
}

template <typename T>
std::size_t ParameterSet<T>::count() const {
  std::size_t n = 0;
  for (const auto& w : weights) n += w.size();
  for (const auto& b : biases) n += b.size();
  return n;
}

template <typename T>
Network<T>::Network(NetworkSpec spec, std::vector<ConvParams<T>> convs)
    : spec_(std::move(spec)), convs_(std::move(convs)) {
  spec_.validate();
  if (convs_.size() != spec_.conv_count()) {
    throw ShapeError("layers", "network: " + std::to_string(convs_.size()) +
                                   " parameter blocks for " +
                                   std::to_string(spec_.conv_count()) + " convolutions");
  }
  std::size_t ci = 0;
  for (const LayerSpec& l : spec_.layers) {
    if (!l.is_conv()) continue;
    const ConvParams<T>& c = convs_[ci++];
    const Shape expected{l.out_ch, l.in_ch, kKernelSize, kKernelSize};
    if (c.weights.shape() != expected) {
      throw ShapeError("weights", "network: layer '" + l.name + "' weights " +
                                      shape_string(c.weights.shape()) + " != " +
                                      shape_string(expected));
    }
    if (c.bias.size() != l.out_ch) {
      throw ShapeError("bias", "network: layer '" + l.name + "' bias length mismatch");
    }
    if (c.stride != l.stride() || c.pad != 1) {
      throw InvalidArgument("network: layer '" + l.name + "' stride/pad mismatch");
    }
  }
}

template <typename T>
std::size_t Network<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& c : convs_) n += c.weights.size() + c.bias.size();
  return n;
}

template <typename T>
ParameterSet<T> Network<T>::zero_parameters() const {
  ParameterSet<T> p;
  for (const auto& c : convs_) {
    p.weights.emplace_back(c.weights.shape());
    p.biases.emplace_back(c.bias.size(), T{0});
  }
  return p;
}

template <typename T>
Network<T> build_network(const NetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::vector<ConvParams<T>> convs;
  for (const LayerSpec& l : spec.layers) {
    if (!l.is_conv()) continue;
    const double bound = std::sqrt(6.0 / static_cast<double>(l.in_ch * kKernelSize * kKernelSize));
    Tensor<T> w({l.out_ch, l.in_ch, kKernelSize, kKernelSize});
    for (auto& v : w.data()) v = static_cast<T>(rng.uniform(-bound, bound));
    convs.push_back({std::move(w), std::vector<T>(l.out_ch, T{0}), l.stride(), 1});
  }
  return Network<T>(spec, std::move(convs));
}

template <typename T>
Tensor<T> forward(const Network<T>& net, const Tensor<T>& input, ForwardCache<T>* cache) {
  const NetworkSpec& spec = net.spec();
  require_rank(input, 3, "network forward");
  if (input.extent(0) != spec.input_channels()) {
    throw ShapeError("channels", "network forward: input has " +
                                     std::to_string(input.extent(0)) + " channels, expected " +
                                     std::to_string(spec.input_channels()));
  }
  const std::size_t in_h = input.extent(1), in_w = input.extent(2);
  layer_shapes(spec, in_h, in_w);  // admissibility
  require_finite(input, "network forward");
  if (cache) {
    *cache = ForwardCache<T>{};
    cache->in_h = in_h;
    cache->in_w = in_w;
  }

  Tensor<T> x = input;
  std::size_t ci = 0;
  for (const LayerSpec& l : spec.layers) {
    if (l.kind == LayerKind::kCrop) {
      if (cache) {
        cache->crop_source_h = x.extent(1);
        cache->crop_source_w = x.extent(2);
      }
      x = crop_center(x, in_h, in_w);
      continue;
    }
    if (l.kind == LayerKind::kUpConv) x = upsample2x_forward(x);
    Tensor<T> z = conv2d_forward(x, net.conv(ci++));
    if (cache) cache->conv_inputs.push_back(std::move(x));
    if (l.activation) {
      x = leaky_relu_forward(z, l.alpha);
      if (cache) cache->pre_activation.push_back(std::move(z));
    } else {
      x = std::move(z);
      if (cache) cache->pre_activation.emplace_back();
    }
    if (!x.all_finite()) {
      throw NumericError("network forward: non-finite activation after '" + l.name + "'");
    }
  }
  return x;
}

template <typename T>
ParameterSet<T> backward(const Network<T>& net, const ForwardCache<T>& cache,
                         const Tensor<T>& grad_output) {
  const NetworkSpec& spec = net.spec();
  const std::size_t convs = net.conv_count();
  if (cache.conv_inputs.size() != convs || cache.pre_activation.size() != convs) {
    throw ShapeError("cache", "network backward: cache does not come from a matching forward");
  }
  const Shape expected{spec.layers.back().out_ch, cache.in_h, cache.in_w};
  if (grad_output.shape() != expected) {
    throw ShapeError("grad_output", "network backward: gradient shape " +
                                        shape_string(grad_output.shape()) + " != output " +
                                        shape_string(expected));
  }
  ParameterSet<T> grads;
  grads.weights.resize(convs);
  grads.biases.resize(convs);

  Tensor<T> g = grad_output;
  std::size_t ci = convs;
  for (auto it = spec.layers.rbegin(); it != spec.layers.rend(); ++it) {
    const LayerSpec& l = *it;
    if (l.kind == LayerKind::kCrop) {
      g = crop_center_backward(g, cache.crop_source_h, cache.crop_source_w);
      continue;
    }
    --ci;
    if (l.activation) g = leaky_relu_backward(cache.pre_activation[ci], g, l.alpha);
    ConvGrads<T> cg = conv2d_backward(cache.conv_inputs[ci], net.conv(ci), g);
    grads.weights[ci] = std::move(cg.weights);
    grads.biases[ci] = std::move(cg.bias);
    g = std::move(cg.input);
    if (l.kind == LayerKind::kUpConv) g = upsample2x_backward(g);
  }
  return grads;
}

template struct ParameterSet<float>;
template struct ParameterSet<double>;
template class Network<float>;
template class Network<double>;
template Network<float> build_network(const NetworkSpec&, std::uint64_t);
template Network<double> build_network(const NetworkSpec&, std::uint64_t);
template Tensor<float> forward(const Network<float>&, const Tensor<float>&, ForwardCache<float>*);
template Tensor<double> forward(const Network<double>&, const Tensor<double>&, ForwardCache<double>*);
template ParameterSet<float> backward(const Network<float>&, const ForwardCache<float>&,
                                      const Tensor<float>&);
template ParameterSet<double> backward(const Network<double>&, const ForwardCache<double>&,
                                       const Tensor<double>&);

}  // namespace sceneednet
