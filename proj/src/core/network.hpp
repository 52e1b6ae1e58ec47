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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/kernels.hpp"
#include "core/tensor.hpp"

namespace sceneednet {

enum class LayerKind : std::uint8_t {
  kConvDown = 0,    // stride-2 convolution
  kConvSame = 1,    // stride-1 convolution
  kUpConv = 2,      // 2x nearest upsample, then stride-1 convolution
  kOutputConv = 3,  // stride-1 convolution, no activation
  kCrop = 4,        // center crop back to the input resolution
};

const char* layer_kind_name(LayerKind kind);

struct LayerSpec {
  std::string name;
  LayerKind kind = LayerKind::kConvSame;
  std::size_t in_ch = 0;
  std::size_t out_ch = 0;
  bool activation = true;  // leaky ReLU after the convolution
  double alpha = 0.1;

  bool is_conv() const { return kind != LayerKind::kCrop; }
  std::size_t stride() const { return kind == LayerKind::kConvDown ? 2 : 1; }

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct NetworkSpec {
  std::vector<LayerSpec> layers;

  /// The 11-convolution encoder-decoder:
  ///   conv0 12->64, conv1 64->128, conv1_1 128->256, conv2 256->512  (stride 2)
  ///   conv2_1 512->1024, conv3 1024->1024                           (stride 1)
  ///   conv3_1 1024->512, conv4 512->256, conv4_1 256->128, conv5 128->64 (up)
  ///   crop to input size, Output 64->3 (no activation)
  static NetworkSpec sceneednet(double alpha = 0.1);

  /// Checks the channel chain and the 4 down / 2 same / 4 up / output / crop
  /// layout. Throws InvalidArgument.
  void validate() const;

  std::size_t conv_count() const;
  std::size_t input_channels() const { return layers.front().in_ch; }

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

struct LayerShape {
  std::string name;
  std::size_t channels, height, width;
};

/// Stacked L_t, R_t, L_t+1, R_t+1 RGB planes.
inline constexpr std::size_t kInputChannels = 12;

/// Smallest admissible input extent (four stride-2 halvings).
inline constexpr std::size_t kMinInputExtent = 16;

/// Output shape after every layer (crop included) for an in_h x in_w input.
std::vector<LayerShape> layer_shapes(const NetworkSpec& spec, std::size_t in_h,
                                     std::size_t in_w);

/// Per-convolution parameter tensors, also used for gradients and momentum.
template <typename T>
struct ParameterSet {
  std::vector<Tensor<T>> weights;
  std::vector<std::vector<T>> biases;

  std::size_t count() const;
};

template <typename T>
class Network {
 public:
  Network() = default;
  /// `convs` holds one entry per convolution layer, in spec order.
  Network(NetworkSpec spec, std::vector<ConvParams<T>> convs);

  const NetworkSpec& spec() const { return spec_; }
  std::size_t conv_count() const { return convs_.size(); }
  const ConvParams<T>& conv(std::size_t i) const { return convs_.at(i); }
  ConvParams<T>& mutable_conv(std::size_t i) { return convs_.at(i); }
  std::size_t parameter_count() const;

  /// Trained epochs recorded in checkpoints.
  std::uint32_t epoch() const { return epoch_; }
  void set_epoch(std::uint32_t e) { epoch_ = e; }

  /// Same network at another precision.
  template <typename U>
  Network<U> cast() const {
    std::vector<ConvParams<U>> convs;
    for (const auto& c : convs_) {
      std::vector<U> bias(c.bias.begin(), c.bias.end());
      convs.push_back({c.weights.template cast<U>(), std::move(bias), c.stride, c.pad});
    }
    Network<U> out(spec_, std::move(convs));
    out.set_epoch(epoch_);
    return out;
  }

  /// Gradient-shaped zero buffers.
  ParameterSet<T> zero_parameters() const;

 private:
  NetworkSpec spec_;
  std::vector<ConvParams<T>> convs_;
  std::uint32_t epoch_ = 0;
};

/// Deterministic initialization: weights ~ U(-b, b), b = sqrt(6 / (in_ch * 9)),
/// drawn layer by layer in row-major order; biases zero.
template <typename T>
Network<T> build_network(const NetworkSpec& spec, std::uint64_t seed);

/// Activations kept by forward() for backward().
template <typename T>
struct ForwardCache {
  std::size_t in_h = 0, in_w = 0;
  std::vector<Tensor<T>> conv_inputs;     // per convolution, after upsampling
  std::vector<Tensor<T>> pre_activation;  // per convolution
  std::size_t crop_source_h = 0, crop_source_w = 0;
};

/// Runs the network on a [C,H,W] input; fills `cache` when given. Output is
/// [3,H,W].
template <typename T>
Tensor<T> forward(const Network<T>& net, const Tensor<T>& input,
                  ForwardCache<T>* cache = nullptr);

template <typename T>
ParameterSet<T> backward(const Network<T>& net, const ForwardCache<T>& cache,
                         const Tensor<T>& grad_output);

/// Checkpoint: "SEDN", u32 version, spec block, u32 epoch, parameter blocks
/// (float32), optional momentum blocks. All little-endian.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Network<float> network;
  std::optional<ParameterSet<float>> momentum;
};

std::string serialize_checkpoint(const Network<float>& net,
                                 const ParameterSet<float>* momentum = nullptr);
Checkpoint deserialize_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const Network<float>& net,
                     const ParameterSet<float>* momentum = nullptr);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sceneednet
