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

#include "core/training.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "core/random.hpp"

namespace sceneednet {
namespace {

template <typename T>
void check_target(const Tensor<T>& pred, const SceneFlowField& target, const char* what) {
  require_rank(pred, 3, what);
  if (pred.extent(0) != 3) {
    throw ShapeError("channels", std::string(what) + ": prediction must have 3 channels");
  }
  if (pred.shape() != target.flow.shape()) {
    throw ShapeError(pred.extent(1) != target.height() ? "height" : "width",
                     std::string(what) + ": prediction " + shape_string(pred.shape()) +
                         " vs target " + shape_string(target.flow.shape()));
  }
  if (target.valid.shape() != Shape{target.height(), target.width()}) {
    throw ShapeError("valid", std::string(what) + ": validity mask shape mismatch");
  }
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, std::uint32_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed ^ (0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(epoch) + 1)));
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

void add_into(ParameterSet<float>& acc, const ParameterSet<float>& g) {
  for (std::size_t i = 0; i < acc.weights.size(); ++i) {
    auto a = acc.weights[i].data();
    auto b = g.weights[i].data();
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    for (std::size_t k = 0; k < acc.biases[i].size(); ++k) acc.biases[i][k] += g.biases[i][k];
  }
}

void scale(ParameterSet<float>& p, float s) {
  for (auto& w : p.weights)
    for (auto& v : w.data()) v *= s;
  for (auto& b : p.biases)
    for (auto& v : b) v *= s;
}

std::string format_epoch_line(std::uint32_t epoch, double lr, double train,
                              const std::optional<double>& val) {
  char buf[160];
  if (val) {
    std::snprintf(buf, sizeof(buf), "epoch=%u lr=%.9g train_loss=%.9g val_loss=%.9g", epoch, lr,
                  train, *val);
  } else {
    std::snprintf(buf, sizeof(buf), "epoch=%u lr=%.9g train_loss=%.9g", epoch, lr, train);
  }
  return buf;
}

Sample load_with_context(const SampleSource& data, std::size_t index, std::uint32_t epoch) {
  try {
    return data.load(index);
  } catch (const Error& e) {
    throw Error(e.kind(), "epoch " + std::to_string(epoch + 1) + ", " + data.describe(index) +
                              ": " + e.what());
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!(lr0 > 0) || !std::isfinite(lr0)) throw InvalidArgument("train: lr must be positive");
  if (!(momentum >= 0 && momentum < 1)) throw InvalidArgument("train: momentum must be in [0, 1)");
  if (decay && (!(*decay >= 0) || !std::isfinite(*decay)))
    throw InvalidArgument("train: decay must be non-negative");
  if (batch == 0) throw InvalidArgument("train: batch must be at least 1");
}

template <typename T>
LossAndGrad<T> epe_loss(const Tensor<T>& pred, const SceneFlowField& target, double eps) {
  check_target(pred, target, "epe_loss");
  const std::size_t h = target.height(), w = target.width(), n = h * w;
  const std::size_t valid = target.valid_count();
  if (valid == 0) throw DataError("epe_loss: no valid pixels in target");
  LossAndGrad<T> out{0.0, Tensor<T>(pred.shape())};
  const double inv = 1.0 / static_cast<double>(valid);
  const double eps2 = eps * eps;
  double sum = 0.0;
  std::size_t exact = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (!target.valid[p]) continue;
    double r[3], sq = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      r[c] = static_cast<double>(pred[c * n + p]) - static_cast<double>(target.flow[c * n + p]);
      sq += r[c] * r[c];
    }
    // Exact matches cost exactly eps and have zero gradient.
    if (sq == 0.0) {
      ++exact;
      continue;
    }
    const double norm = std::sqrt(sq + eps2);
    sum += norm;
    for (std::size_t c = 0; c < 3; ++c) out.grad[c * n + p] = static_cast<T>(r[c] / norm * inv);
  }
  out.loss = (sum + static_cast<double>(exact) * eps) / static_cast<double>(valid);
  return out;
}

double epe_metric(const TensorF& pred, const SceneFlowField& target) {
  check_target(pred, target, "epe_metric");
  const std::size_t n = target.height() * target.width();
  const std::size_t valid = target.valid_count();
  if (valid == 0) throw DataError("epe_metric: no valid pixels in target");
  double sum = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    if (!target.valid[p]) continue;
    double sq = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      const double r = static_cast<double>(pred[c * n + p]) - static_cast<double>(target.flow[c * n + p]);
      sq += r * r;
    }
    sum += std::sqrt(sq);
  }
  return sum / static_cast<double>(valid);
}

double lr_schedule(std::uint32_t epoch, const TrainConfig& cfg) {
  return cfg.lr0 / (1.0 + cfg.effective_decay() * static_cast<double>(epoch));
}

template <typename T>
void sgd_step(Network<T>& net, const ParameterSet<T>& grads, ParameterSet<T>& velocity,
              double lr, double momentum) {
  const std::size_t n = net.conv_count();
  if (grads.weights.size() != n || grads.biases.size() != n || velocity.weights.size() != n ||
      velocity.biases.size() != n) {
    throw ShapeError("layers", "sgd_step: gradient/velocity layer count mismatch");
  }
  const T m = static_cast<T>(momentum), rate = static_cast<T>(lr);
  for (std::size_t i = 0; i < n; ++i) {
    ConvParams<T>& conv = net.mutable_conv(i);
    if (grads.weights[i].shape() != conv.weights.shape() ||
        velocity.weights[i].shape() != conv.weights.shape() ||
        grads.biases[i].size() != conv.bias.size() ||
        velocity.biases[i].size() != conv.bias.size()) {
      throw ShapeError("parameters", "sgd_step: shape mismatch at convolution " + std::to_string(i));
    }
    auto w = conv.weights.data();
    auto v = velocity.weights[i].data();
    auto g = grads.weights[i].data();
    for (std::size_t k = 0; k < w.size(); ++k) {
      v[k] = m * v[k] - rate * g[k];
      w[k] += v[k];
    }
    auto& b = conv.bias;
    auto& vb = velocity.biases[i];
    const auto& gb = grads.biases[i];
    for (std::size_t k = 0; k < b.size(); ++k) {
      vb[k] = m * vb[k] - rate * gb[k];
      b[k] += vb[k];
    }
  }
}

FitResult fit(Network<float>& net, const SampleSource& data, const TrainConfig& cfg,
              const FitHooks& hooks) {
  cfg.validate();
  FitResult result{{}, {}, OptimizerState::for_network(net)};
  if (cfg.epochs == 0) return result;
  if (data.size() == 0) throw DataError("fit: empty training set");

  for (std::uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_schedule(epoch, cfg);
    const std::vector<std::size_t> order = epoch_order(data.size(), cfg.seed, epoch);
    double loss_sum = 0.0;
    ParameterSet<float> acc;
    std::size_t in_batch = 0;
    for (std::size_t step = 0; step < order.size(); ++step) {
      const Sample s = load_with_context(data, order[step], epoch);
      ForwardCache<float> cache;
      LossAndGrad<float> lg;
      ParameterSet<float> grads;
      try {
        const TensorF pred = forward(net, s.input, &cache);
        lg = epe_loss(pred, s.target);
        grads = backward(net, cache, lg.grad);
      } catch (const Error& e) {
        throw Error(e.kind(), "epoch " + std::to_string(epoch + 1) + ", " +
                                  data.describe(order[step]) + ": " + e.what());
      }
      loss_sum += lg.loss;
      if (in_batch == 0) {
        acc = std::move(grads);
      } else {
        add_into(acc, grads);
      }
      ++in_batch;
      if (in_batch == cfg.batch || step + 1 == order.size()) {
        if (in_batch > 1) scale(acc, 1.0f / static_cast<float>(in_batch));
        sgd_step(net, acc, result.optimizer.velocity, lr, cfg.momentum);
        in_batch = 0;
      }
    }
    const double train = loss_sum / static_cast<double>(data.size());
    result.train_loss.push_back(train);
    net.set_epoch(net.epoch() + 1);

    std::optional<double> val;
    if (hooks.validation) {
      val = evaluate(net, *hooks.validation);
      result.val_loss.push_back(*val);
    }
    if (hooks.on_epoch) hooks.on_epoch(format_epoch_line(epoch + 1, lr, train, val));
    if (cfg.checkpoint_every > 0 && !hooks.checkpoint_dir.empty() &&
        (epoch + 1) % cfg.checkpoint_every == 0) {
      char name[32];
      std::snprintf(name, sizeof(name), "epoch_%04u.sedn", epoch + 1);
      save_checkpoint(hooks.checkpoint_dir / name, net, &result.optimizer.velocity);
    }
  }
  return result;
}

double evaluate(const Network<float>& net, const SampleSource& data) {
  if (data.size() == 0) throw DataError("evaluate: empty dataset");
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Sample s = data.load(i);
    sum += epe_metric(forward(net, s.input), s.target);
  }
  return sum / static_cast<double>(data.size());
}

template LossAndGrad<float> epe_loss(const Tensor<float>&, const SceneFlowField&, double);
template LossAndGrad<double> epe_loss(const Tensor<double>&, const SceneFlowField&, double);
template void sgd_step(Network<float>&, const ParameterSet<float>&, ParameterSet<float>&, double,
                       double);
template void sgd_step(Network<double>&, const ParameterSet<double>&, ParameterSet<double>&,
                       double, double);

}  // namespace sceneednet
