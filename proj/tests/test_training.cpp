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


#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "core/colorize.hpp"
#include "core/training.hpp"
#include "doctest.h"
#include "support/oracles.hpp"
#include "support/synthetic_scene.hpp"

namespace sceneednet {
namespace {
namespace fs = std::filesystem;

const NetworkSpec kSpec = NetworkSpec::sceneednet();

SceneFlowField constant_target(std::size_t h, std::size_t w, float x, float y, float z) {
  SceneFlowField t{TensorF({3, h, w}), Tensor<std::uint8_t>({h, w}, 1)};
  for (std::size_t p = 0; p < h * w; ++p) {
    t.flow[p] = x;
    t.flow[h * w + p] = y;
    t.flow[2 * h * w + p] = z;
  }
  return t;
}

Network<float> zero_network() {
  Network<float> net = build_network<float>(kSpec, 0);
  for (std::size_t i = 0; i < net.conv_count(); ++i) {
    for (auto& v : net.mutable_conv(i).weights.data()) v = 0.0f;
  }
  return net;
}

bool same_parameters(const Network<float>& a, const Network<float>& b) {
  for (std::size_t i = 0; i < a.conv_count(); ++i) {
    const auto& wa = a.conv(i).weights;
    const auto& wb = b.conv(i).weights;
    if (std::memcmp(wa.raw(), wb.raw(), wa.size() * sizeof(float)) != 0) return false;
    if (a.conv(i).bias != b.conv(i).bias) return false;
  }
  return true;
}

TEST_CASE("epe_loss: single valid pixel with residual (1, 2, 2) costs 3") {
  SceneFlowField t = constant_target(2, 2, 0, 0, 0);
  std::fill(t.valid.data().begin(), t.valid.data().end(), 0);
  t.valid.at(1, 0) = 1;
  TensorD pred({3, 2, 2});
  pred.at(0, 1, 0) = 1;
  pred.at(1, 1, 0) = 2;
  pred.at(2, 1, 0) = 2;
  pred.at(0, 0, 1) = 100;  // invalid pixel, ignored
  const LossAndGrad<double> lg = epe_loss(pred, t);
  CHECK(lg.loss == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(lg.loss - 3.0) <= 1e-8);
  CHECK(lg.grad.at(0, 1, 0) == doctest::Approx(1.0 / 3));
  CHECK(lg.grad.at(1, 1, 0) == doctest::Approx(2.0 / 3));
  CHECK(lg.grad.at(0, 0, 1) == 0.0);
}

TEST_CASE("epe_loss: zero residual gives at most the smoothing term") {
  Rng rng(1);
  const TensorF pred = testing::random_tensor<float>({3, 4, 5}, rng);
  SceneFlowField t{pred, Tensor<std::uint8_t>({4, 5}, 1)};
  const LossAndGrad<float> lg = epe_loss(pred, t);
  CHECK(lg.loss <= 1e-8);
  CHECK(lg.loss >= 0.0);
  for (float g : lg.grad.data()) CHECK(g == 0.0f);
  CHECK(epe_metric(pred, t) == 0.0);
}

TEST_CASE("epe_loss gradient matches finite differences") {
  Rng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    SceneFlowField t{testing::random_tensor<float>({3, 4, 5}, rng), Tensor<std::uint8_t>({4, 5})};
    for (auto& v : t.valid.data()) v = rng.uniform() < 0.7;
    t.valid[0] = 1;
    const TensorD pred = testing::random_tensor<double>({3, 4, 5}, rng);
    // Scalar loss as a 1-element output.
    auto op = make_op([&](const TensorD& x) { return TensorD({1}, epe_loss(x, t).loss); },
                      [&](const TensorD& x, const TensorD& g) {
                        TensorD grad = epe_loss(x, t).grad;
                        for (auto& v : grad.data()) v *= g[0];
                        return grad;
                      });
    CHECK(gradcheck(op, pred, 1e-6) < 1e-6);
  }
}

TEST_CASE("epe_loss errors") {
  SceneFlowField t = constant_target(2, 2, 0, 0, 0);
  std::fill(t.valid.data().begin(), t.valid.data().end(), 0);
  CHECK_THROWS_AS(epe_loss(TensorF({3, 2, 2}), t), DataError);
  CHECK_THROWS_AS(epe_metric(TensorF({3, 2, 2}), t), DataError);
  const SceneFlowField ok = constant_target(2, 2, 0, 0, 0);
  CHECK_THROWS_AS(epe_loss(TensorF({2, 2, 2}), ok), ShapeError);
  CHECK_THROWS_AS(epe_loss(TensorF({3, 2, 3}), ok), ShapeError);
}

TEST_CASE("epe_metric: 3-4-5 triangle") {
  const SceneFlowField t = constant_target(3, 4, 3, 4, 0);
  CHECK(epe_metric(TensorF({3, 3, 4}), t) == 5.0);
  CHECK(epe_loss(TensorF({3, 3, 4}), t).loss == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("lr_schedule") {
  TrainConfig cfg;
  cfg.lr0 = 0.1;
  cfg.epochs = 10;
  CHECK(lr_schedule(0, cfg) == 0.1);
  CHECK(lr_schedule(10, cfg) == doctest::Approx(0.1 / 1.1).epsilon(1e-15));
  CHECK(lr_schedule(10, cfg) == doctest::Approx(0.090909).epsilon(1e-5));
  double prev = lr_schedule(0, cfg);
  for (std::uint32_t e = 1; e < 1000; ++e) {
    const double lr = lr_schedule(e, cfg);
    CHECK(lr > 0);
    CHECK(lr <= prev);
    prev = lr;
  }
  cfg.decay = 0.0;
  CHECK(lr_schedule(7, cfg) == 0.1);
  cfg.decay = 0.5;
  CHECK(lr_schedule(2, cfg) == doctest::Approx(0.05));
  TrainConfig defaults;
  CHECK(defaults.lr0 == 1e-5);
  CHECK(defaults.momentum == 0.5);
  CHECK(defaults.epochs == 100);
  CHECK(defaults.effective_decay() == doctest::Approx(1e-7));
}

TEST_CASE("TrainConfig validation") {
  TrainConfig cfg;
  cfg.validate();
  cfg.lr0 = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = TrainConfig{};
  cfg.momentum = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = TrainConfig{};
  cfg.decay = -1;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = TrainConfig{};
  cfg.batch = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("sgd_step recurrences") {
  const Network<float> start = build_network<float>(kSpec, 3);
  ParameterSet<float> g = start.zero_parameters();
  for (auto& w : g.weights)
    for (auto& v : w.data()) v = 0.25f;
  for (auto& b : g.biases) std::fill(b.begin(), b.end(), -0.5f);

  SUBCASE("momentum 0 is a plain step") {
    Network<float> net = start;
    ParameterSet<float> vel = net.zero_parameters();
    sgd_step(net, g, vel, 0.5, 0.0);
    CHECK(net.conv(4).weights[17] == start.conv(4).weights[17] - 0.125f);
    CHECK(net.conv(10).bias[2] == 0.25f);
  }
  SUBCASE("two steps with momentum 0.5 and lr 1 move by -2.5 g") {
    Network<float> net = start;
    ParameterSet<float> vel = net.zero_parameters();
    sgd_step(net, g, vel, 1.0, 0.5);
    sgd_step(net, g, vel, 1.0, 0.5);
    for (std::size_t i = 0; i < net.conv_count(); ++i) {
      CHECK(net.conv(i).bias[0] == doctest::Approx(1.25));
      CHECK(net.conv(i).weights[5] == doctest::Approx(start.conv(i).weights[5] - 0.625));
      CHECK(vel.weights[i][5] == doctest::Approx(-0.375));
    }
  }
  SUBCASE("zero gradients leave parameters unchanged") {
    Network<float> net = start;
    ParameterSet<float> vel = net.zero_parameters();
    const ParameterSet<float> zero = net.zero_parameters();
    for (int k = 0; k < 5; ++k) sgd_step(net, zero, vel, 1.0, 0.9);
    CHECK(same_parameters(net, start));
  }
  SUBCASE("shape mismatches") {
    Network<float> net = start;
    ParameterSet<float> vel = net.zero_parameters();
    ParameterSet<float> short_g = g;
    short_g.weights.pop_back();
    short_g.biases.pop_back();
    CHECK_THROWS_AS(sgd_step(net, short_g, vel, 1.0, 0.5), ShapeError);
    ParameterSet<float> bad_g = g;
    bad_g.biases[3].push_back(0);
    CHECK_THROWS_AS(sgd_step(net, bad_g, vel, 1.0, 0.5), ShapeError);
  }
}

std::vector<Sample> toy_samples(std::size_t n, std::size_t h, std::size_t w) {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(testing::make_sample(testing::random_scene(100 + i, h, w), 0));
  }
  return out;
}

TEST_CASE("fit is deterministic for a fixed seed") {
  const InMemorySource data(toy_samples(3, 16, 32));
  TrainConfig cfg;
  cfg.lr0 = 1e-3;
  cfg.epochs = 3;
  cfg.seed = 5;
  Network<float> a = build_network<float>(kSpec, 7), b = build_network<float>(kSpec, 7);
  std::vector<std::string> lines;
  FitHooks hooks;
  hooks.on_epoch = [&](const std::string& l) { lines.push_back(l); };
  const FitResult ra = fit(a, data, cfg, hooks);
  const FitResult rb = fit(b, data, cfg);
  CHECK(ra.train_loss == rb.train_loss);
  CHECK(same_parameters(a, b));
  CHECK(a.epoch() == 3);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].rfind("epoch=1 lr=0.001 train_loss=", 0) == 0);
  CHECK(lines[2].find("val_loss") == std::string::npos);

  Network<float> c = build_network<float>(kSpec, 7);
  cfg.seed = 6;
  fit(c, data, cfg);
  CHECK_FALSE(same_parameters(a, c));  // different visiting order
}

TEST_CASE("fit with zero epochs leaves the network untouched") {
  const InMemorySource data(toy_samples(1, 16, 16));
  TrainConfig cfg;
  cfg.epochs = 0;
  Network<float> net = build_network<float>(kSpec, 8);
  const Network<float> before = net;
  const FitResult r = fit(net, data, cfg);
  CHECK(r.train_loss.empty());
  CHECK(same_parameters(net, before));
  CHECK(net.epoch() == 0);
  CHECK_THROWS_AS(fit(net, InMemorySource({}), TrainConfig{}), DataError);
}

TEST_CASE("fit: a batch of identical samples equals one sample") {
  const std::vector<Sample> one = toy_samples(1, 16, 32);
  TrainConfig cfg;
  cfg.lr0 = 1e-3;
  cfg.epochs = 2;
  Network<float> a = build_network<float>(kSpec, 9), b = a;
  const FitResult ra = fit(a, InMemorySource(one), cfg);
  cfg.batch = 2;
  const FitResult rb = fit(b, InMemorySource({one[0], one[0]}), cfg);
  CHECK(ra.train_loss == rb.train_loss);
  CHECK(same_parameters(a, b));
}

TEST_CASE("fit: validation, checkpoints and error context") {
  const InMemorySource data(toy_samples(2, 16, 32));
  const fs::path dir = testing::fresh_temp_dir("fit_hooks");
  TrainConfig cfg;
  cfg.lr0 = 1e-4;
  cfg.epochs = 4;
  cfg.checkpoint_every = 2;
  Network<float> net = build_network<float>(kSpec, 10);
  FitHooks hooks;
  hooks.validation = &data;
  hooks.checkpoint_dir = dir;
  std::vector<std::string> lines;
  hooks.on_epoch = [&](const std::string& l) { lines.push_back(l); };
  const FitResult r = fit(net, data, cfg, hooks);
  CHECK(r.val_loss.size() == 4);
  CHECK(lines[3].find(" val_loss=") != std::string::npos);
  CHECK(r.val_loss[3] == evaluate(net, data));
  CHECK_FALSE(fs::exists(dir / "epoch_0001.sedn"));
  REQUIRE(fs::exists(dir / "epoch_0002.sedn"));
  const Checkpoint cp = load_checkpoint(dir / "epoch_0004.sedn");
  CHECK(cp.network.epoch() == 4);
  CHECK(same_parameters(cp.network, net));
  CHECK(cp.momentum.has_value());

  class Failing final : public SampleSource {
   public:
    std::size_t size() const override { return 2; }
    Sample load(std::size_t i) const override {
      if (i == 1) throw IoError("disk on fire");
      return testing::make_sample(testing::random_scene(1, 16, 16), 0);
    }
    std::string describe(std::size_t i) const override { return "item " + std::to_string(i); }
  };
  cfg.checkpoint_every = 0;
  try {
    fit(net, Failing{}, cfg);
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
    CHECK(std::string(e.what()).find("epoch 1, item 1: disk on fire") != std::string::npos);
  }
}

TEST_CASE("fit on one static sample: loss does not grow") {
  const InMemorySource data({testing::make_sample(testing::static_scene(11, 32, 64), 0)});
  TrainConfig cfg;
  cfg.epochs = 50;
  Network<float> net = build_network<float>(kSpec, 12);
  const FitResult r = fit(net, data, cfg);
  REQUIRE(r.train_loss.size() == 50);
  for (std::size_t e = 1; e < r.train_loss.size(); ++e) {
    CAPTURE(e);
    CHECK(r.train_loss[e] <= 1.05 * r.train_loss[e - 1]);
  }
  CHECK(r.train_loss.back() < r.train_loss.front());
}

TEST_CASE("fit overfits a single 48x96 sample") {
  const InMemorySource data({testing::make_sample(testing::random_scene(13, 48, 96), 0)});
  TrainConfig cfg;
  cfg.lr0 = 1e-3;
  cfg.epochs = 200;
  Network<float> net = build_network<float>(kSpec, 14);
  const FitResult r = fit(net, data, cfg);
  CHECK(r.train_loss.back() < 0.5 * r.train_loss.front());
}

TEST_CASE("evaluate") {
  const Network<float> zero = zero_network();
  std::vector<Sample> samples;
  for (int k = 0; k < 3; ++k) {
    samples.push_back({TensorF({12, 16, 16}), constant_target(16, 16, 3, 4, 0)});
  }
  CHECK(evaluate(zero, InMemorySource(samples)) == 5.0);

  const Network<float> net = build_network<float>(kSpec, 15);
  std::vector<Sample> self;
  Rng rng(16);
  for (int k = 0; k < 2; ++k) {
    TensorF x = testing::random_tensor<float>({12, 16, 32}, rng, -0.5, 0.5);
    SceneFlowField t{forward(net, x), Tensor<std::uint8_t>({16, 32}, 1)};
    self.push_back({std::move(x), std::move(t)});
  }
  CHECK(evaluate(net, InMemorySource(self)) == 0.0);

  std::vector<Sample> toy = toy_samples(4, 16, 32);
  const double forward_order = evaluate(net, InMemorySource(toy));
  std::reverse(toy.begin(), toy.end());
  std::swap(toy[0], toy[2]);
  CHECK(evaluate(net, InMemorySource(toy)) == doctest::Approx(forward_order).epsilon(1e-12));
  CHECK_THROWS_AS(evaluate(net, InMemorySource({})), DataError);
}

TEST_CASE("diverging_color endpoints") {
  CHECK(diverging_color(0.0) == Rgb{255, 255, 255});
  CHECK(diverging_color(1.0) == Rgb{255, 0, 0});
  CHECK(diverging_color(-1.0) == Rgb{0, 0, 255});
  CHECK(diverging_color(7.0) == Rgb{255, 0, 0});
  CHECK(diverging_color(0.5) == Rgb{255, 128, 128});
  CHECK(diverging_color(std::nan("")) == kInvalidColor);
}

TEST_CASE("colorize_channel") {
  TensorF f({3, 1, 3});
  f.at(1, 0, 0) = -2;
  f.at(1, 0, 1) = 1;
  f.at(1, 0, 2) = 8;
  const RgbImage zero = colorize_channel(f, 0);
  for (std::size_t p = 0; p < 3; ++p) {
    CHECK(Rgb{zero.pixels[3 * p], zero.pixels[3 * p + 1], zero.pixels[3 * p + 2]} == kMidGray);
  }
  Tensor<std::uint8_t> valid({1, 3}, 1);
  valid[2] = 0;  // the 8 no longer sets the range
  const RgbImage img = colorize_channel(f, 1, &valid);
  CHECK(Rgb{img.pixels[0], img.pixels[1], img.pixels[2]} == Rgb{0, 0, 255});
  CHECK(Rgb{img.pixels[3], img.pixels[4], img.pixels[5]} == diverging_color(0.5));
  CHECK(Rgb{img.pixels[6], img.pixels[7], img.pixels[8]} == kInvalidColor);
  CHECK_THROWS_AS(colorize_channel(f, 3), ShapeError);
  Tensor<std::uint8_t> wrong({3, 1});
  CHECK_THROWS_AS(colorize_channel(f, 0, &wrong), ShapeError);
}

}  // namespace
}  // namespace sceneednet
