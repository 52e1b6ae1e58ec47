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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/geometry.hpp"
#include "core/network.hpp"

namespace sceneednet {

struct TrainConfig {
  double lr0 = 1e-5;
  double momentum = 0.5;
  std::uint32_t epochs = 100;
  /// Defaults to lr0 / epochs when unset.
  std::optional<double> decay;
  std::uint64_t seed = 0;
  std::size_t batch = 1;
  /// Save a checkpoint every N epochs (0 = only the final one, by the caller).
  std::uint32_t checkpoint_every = 0;

  double effective_decay() const {
    if (decay) return *decay;
    return epochs > 0 ? lr0 / epochs : 0.0;
  }
  /// Throws InvalidArgument on out-of-range values.
  void validate() const;
};

/// SGD momentum buffers, zero-initialized and shaped like the parameters.
struct OptimizerState {
  ParameterSet<float> velocity;

  static OptimizerState for_network(const Network<float>& net) {
    return {net.zero_parameters()};
  }
};

inline constexpr double kEpeSmoothing = 1e-8;

template <typename T>
struct LossAndGrad {
  double loss = 0;
  Tensor<T> grad;  // [3,H,W], zero at invalid pixels
};

/// Mean over valid pixels of sqrt(|pred - gt|^2 + eps^2), with its exact
/// gradient. Throws DataError when no pixel is valid.
template <typename T>
LossAndGrad<T> epe_loss(const Tensor<T>& pred, const SceneFlowField& target,
                        double eps = kEpeSmoothing);

/// Masked mean 3D end-point error without smoothing.
double epe_metric(const TensorF& pred, const SceneFlowField& target);

/// lr0 / (1 + decay * epoch).
double lr_schedule(std::uint32_t epoch, const TrainConfig& cfg);

/// v <- momentum * v - lr * g; w <- w + v.
template <typename T>
void sgd_step(Network<T>& net, const ParameterSet<T>& grads,
              ParameterSet<T>& velocity, double lr, double momentum);

struct FitHooks {
  const SampleSource* validation = nullptr;
  /// Directory for periodic checkpoints; empty disables them.
  std::filesystem::path checkpoint_dir;
  /// Receives one line per epoch: "epoch=E lr=.. train_loss=.. [val_loss=..]".
  std::function<void(const std::string&)> on_epoch;
};

struct FitResult {
  std::vector<double> train_loss;  // mean smoothed EPE per epoch
  std::vector<double> val_loss;    // mean EPE per epoch, when validating
  OptimizerState optimizer;
};

/// Trains in place. Each epoch visits the samples in a seeded permutation and
/// steps after every `batch` samples with the averaged gradient.
FitResult fit(Network<float>& net, const SampleSource& data, const TrainConfig& cfg,
              const FitHooks& hooks = {});

/// Mean over samples of epe_metric. Throws DataError on an empty source.
double evaluate(const Network<float>& net, const SampleSource& data);

}  // namespace sceneednet
