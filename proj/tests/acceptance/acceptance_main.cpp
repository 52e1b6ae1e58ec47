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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Positional arguments select a subset, e.g. `acceptance 3 4`.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "core/dataset.hpp"
#include "core/flo.hpp"
#include "core/network.hpp"
#include "core/parallel.hpp"
#include "core/pfm.hpp"
#include "core/training.hpp"
#include "support/network_checks.hpp"
#include "support/oracles.hpp"
#include "support/subprocess.hpp"
#include "support/synthetic_scene.hpp"

#ifndef SCENEEDNET_CLI_PATH
#error "SCENEEDNET_CLI_PATH must name the CLI executable"
#endif

namespace sceneednet {
namespace {
namespace fs = std::filesystem;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// Collects failed checks for one criterion; notes go into the summary line.
class Report {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& n) {
    std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    notes_.push_back(n);
  }
  bool passed() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

template <typename T>
bool same_bits(const Tensor<T>& a, const Tensor<T>& b) {
  return a.shape() == b.shape() && std::memcmp(a.raw(), b.raw(), a.size() * sizeof(T)) == 0;
}

std::string cli() { return testing::shell_quote(SCENEEDNET_CLI_PATH); }
std::string q(const fs::path& p) { return testing::shell_quote(p.string()); }

// ---------------------------------------------------------------------------

void shape_fidelity(Report& r) {
  const NetworkSpec spec = NetworkSpec::sceneednet();
  const std::string diff = testing::compare_with_reference(spec);
  r.check(diff.empty(), "layer_shapes at 540x960: " + diff);
  const auto shapes = layer_shapes(spec, 540, 960);
  r.note("conv4 decoder output " + std::to_string(shapes[7].height) + "x" +
         std::to_string(shapes[7].width) + ", conv5 " + std::to_string(shapes[9].height) + "x" +
         std::to_string(shapes[9].width) + " cropped to 540x960");

  const Network<float> net = build_network<float>(spec, 1);
  Rng rng(2);
  const TensorF x = testing::random_tensor<float>({12, 540, 960}, rng, -0.5, 0.5);
  const auto t0 = Clock::now();
  const TensorF y = forward(net, x);
  const double secs = seconds_since(t0);
  r.check(y.shape() == Shape{3, 540, 960}, "forward output shape " + shape_string(y.shape()));
  r.check(secs <= 600, "forward at 540x960 took " + fmt("%.1f s", secs));
  r.note("32-bit forward at 540x960: " + fmt("%.2f s", secs) + " on " +
         std::to_string(thread_count()) + " thread(s)");
}

TensorD conv_input_grad(const TensorD& x, const ConvParams<double>& p, const TensorD& g) {
  return conv2d_backward(x, p, g).input;
}

void gradient_correctness(Report& r) {
  const auto t0 = Clock::now();
  Rng rng(3);
  const TensorD x = testing::random_tensor<double>({3, 9, 10}, rng);
  double worst_kernel = 0;
  auto record = [&](const char* name, double err) {
    worst_kernel = std::max(worst_kernel, err);
    r.check(err < 1e-5, std::string(name) + " gradcheck " + fmt("%.3g", err));
  };
  for (std::size_t stride : {1u, 2u}) {
    const ConvParams<double> p = testing::random_conv<double>(4, 3, stride, rng);
    record(stride == 1 ? "conv stride 1 input" : "conv stride 2 input",
           gradcheck(make_op([&](const TensorD& in) { return conv2d_forward(in, p); },
                             [&](const TensorD& in, const TensorD& g) {
                               return conv_input_grad(in, p, g);
                             }),
                     x, 1e-5));
    record("conv weights",
           gradcheck(make_op(
                         [&](const TensorD& w) {
                           ConvParams<double> c = p;
                           c.weights = w;
                           return conv2d_forward(x, c);
                         },
                         [&](const TensorD& w, const TensorD& g) {
                           ConvParams<double> c = p;
                           c.weights = w;
                           return conv2d_backward(x, c, g).weights;
                         }),
                     p.weights, 1e-5));
    record("conv bias", gradcheck(make_op(
                                      [&](const TensorD& b) {
                                        ConvParams<double> c = p;
                                        c.bias.assign(b.data().begin(), b.data().end());
                                        return conv2d_forward(x, c);
                                      },
                                      [&](const TensorD& b, const TensorD& g) {
                                        ConvParams<double> c = p;
                                        c.bias.assign(b.data().begin(), b.data().end());
                                        const auto gb = conv2d_backward(x, c, g).bias;
                                        return TensorD({gb.size()}, gb);
                                      }),
                                  TensorD({4}, p.bias), 1e-5));
  }
  record("upsample", gradcheck(make_op([](const TensorD& in) { return upsample2x_forward(in); },
                                       [](const TensorD&, const TensorD& g) {
                                         return upsample2x_backward(g);
                                       }),
                               x, 1e-5));
  record("leaky relu",
         gradcheck(make_op([](const TensorD& in) { return leaky_relu_forward(in, 0.1); },
                           [](const TensorD& in, const TensorD& g) {
                             return leaky_relu_backward(in, g, 0.1);
                           }),
                   x, 1e-5));
  record("crop", gradcheck(make_op([](const TensorD& in) { return crop_center(in, 6, 7); },
                                   [](const TensorD&, const TensorD& g) {
                                     return crop_center_backward(g, 9, 10);
                                   }),
                           x, 1e-5));
  SceneFlowField target{testing::random_tensor<float>({3, 9, 10}, rng),
                        Tensor<std::uint8_t>({9, 10}, 1)};
  target.valid[4] = 0;
  record("epe loss", gradcheck(make_op(
                                   [&](const TensorD& p) {
                                     return TensorD({1}, epe_loss(p, target).loss);
                                   },
                                   [&](const TensorD& p, const TensorD& g) {
                                     TensorD d = epe_loss(p, target).grad;
                                     for (auto& v : d.data()) v *= g[0];
                                     return d;
                                   }),
                               x, 1e-5));
  r.note("worst per-kernel relative error " + fmt("%.3g", worst_kernel));

  const TensorD input = testing::random_tensor<double>({12, 16, 32}, rng, -0.5, 0.5);
  const std::vector<double> worst =
      testing::network_gradcheck(testing::gradcheck_network(4), input, 24, 3e-4, 5);
  double worst_net = 0;
  for (std::size_t i = 0; i < worst.size(); ++i) {
    worst_net = std::max(worst_net, worst[i]);
    r.check(worst[i] < 1e-4, "network gradcheck at convolution " + std::to_string(i) + ": " +
                                 fmt("%.3g", worst[i]));
  }
  r.note("whole network, 24 sampled parameters per convolution: worst relative error " +
         fmt("%.3g", worst_net));
  const double secs = seconds_since(t0);
  r.check(secs <= 120, "gradient checks took " + fmt("%.1f s", secs));
  r.note("runtime " + fmt("%.1f s", secs));
}

void geometry_oracle(Report& r) {
  Rng rng(6);
  std::size_t mismatches = 0, valid_total = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t h = 16, w = 16;
    const CameraIntrinsics c{rng.uniform(50, 2000), rng.uniform(50, 2000), rng.uniform(0, 16),
                             rng.uniform(0, 16), rng.uniform(0.1, 3)};
    const TensorF u = testing::random_tensor<float>({h, w}, rng, -4, 4);
    const TensorF v = testing::random_tensor<float>({h, w}, rng, -4, 4);
    const TensorF d0 = testing::random_tensor<float>({h, w}, rng, -5, 80);
    const TensorF d1 = testing::random_tensor<float>({h, w}, rng, -5, 80);
    const SceneFlowField got = reconstruct_scene_flow(u, v, d0, d1, c);
    const SceneFlowField want = testing::oracle_scene_flow(u, v, d0, d1, c);
    mismatches += !(same_bits(got.flow, want.flow) && got.valid == want.valid);
    valid_total += got.valid_count();
  }
  r.check(mismatches == 0, std::to_string(mismatches) + " of 100 instances differ from the oracle");
  r.note("100 random 16x16 instances, " + std::to_string(valid_total) + " valid pixels, " +
         std::to_string(mismatches) + " mismatches");

  const CameraIntrinsics c{1050, 1050, 7.5, 7.5, 1};
  const TensorF zero({16, 16});
  const TensorF d = testing::random_tensor<float>({16, 16}, rng, 0.5, 100);
  const SceneFlowField still = reconstruct_scene_flow(zero, zero, d, d, c);
  bool all_zero = still.valid_count() == 256;
  for (float x : still.flow.data()) all_zero &= x == 0.0f;
  r.check(all_zero, "static scene flow is not exactly zero");

  TensorF d1 = d;
  for (auto& x : d1.data()) x = static_cast<float>(x * rng.uniform(0.5, 1.5));
  const SceneFlowField depth = reconstruct_scene_flow(zero, zero, d, d1, c);
  double worst = 0;
  for (std::size_t p = 0; p < 256; ++p) {
    const double expected = c.fx * c.baseline / d1[p] - c.fx * c.baseline / d[p];
    const double got = depth.flow[2 * 256 + p];
    worst = std::max(worst, std::abs(got - expected) / std::max(1.0, std::abs(expected)));
  }
  r.check(depth.valid_count() == 256, "pure disparity change lost pixels");
  r.check(worst <= 1e-6, "pure disparity change dz error " + fmt("%.3g", worst));
  r.note("pure disparity change: worst dz error " + fmt("%.3g", worst) + " (relative)");
}

float random_finite(Rng& rng) {
  for (;;) {
    const float f = std::bit_cast<float>(static_cast<std::uint32_t>(rng.below(1ull << 32)));
    if (std::isfinite(f)) return f;
  }
}

std::string le32(std::uint32_t v) {
  std::string s(4, '\0');
  for (int b = 0; b < 4; ++b) s[b] = static_cast<char>((v >> (8 * b)) & 0xff);
  return s;
}

void format_fidelity(Report& r) {
  Rng rng(7);
  const fs::path dir = testing::fresh_temp_dir("acceptance_formats");
  std::size_t pfm_fail = 0, flo_fail = 0, kinds[2][2] = {};
  for (int i = 0; i < 1000; ++i) {
    const std::size_t channels = rng.below(2) ? 3 : 1;
    const float scale = (rng.below(2) ? 1.0f : -1.0f) * static_cast<float>(rng.uniform(0.01, 4));
    ++kinds[channels == 3][scale > 0];
    TensorF t({channels, 1 + rng.below(24), 1 + rng.below(24)});
    for (auto& v : t.data()) v = random_finite(rng);
    const std::string bytes = write_pfm(t, scale);
    const PfmImage back = i % 10 == 0 ? (write_file_bytes(dir / "r.pfm", bytes),
                                         read_pfm_file(dir / "r.pfm"))
                                      : read_pfm(bytes);
    pfm_fail += !(same_bits(back.data, t) && back.scale == scale &&
                  write_pfm(back.data, back.scale) == bytes);

    TensorF f({2, 1 + rng.below(24), 1 + rng.below(24)});
    for (auto& v : f.data()) v = random_finite(rng);
    const std::string fbytes = write_flo(f);
    const TensorF fback = read_flo(fbytes);
    flo_fail += !(same_bits(fback, f) && write_flo(fback) == fbytes);
  }
  r.check(pfm_fail == 0, std::to_string(pfm_fail) + " PFM round trips differ");
  r.check(flo_fail == 0, std::to_string(flo_fail) + " FLO round trips differ");
  r.check(kinds[0][0] && kinds[0][1] && kinds[1][0] && kinds[1][1],
          "not every channel/endianness combination was drawn");
  r.note("1000 PFM rasters (1ch LE " + std::to_string(kinds[0][0]) + ", 1ch BE " +
         std::to_string(kinds[0][1]) + ", 3ch LE " + std::to_string(kinds[1][0]) + ", 3ch BE " +
         std::to_string(kinds[1][1]) + ") and 1000 FLO rasters, byte-identical");

  const std::string px(4, '\0');
  const std::vector<std::string> bad_pfm = {
      "", "P6\n1 1\n255\n" + px, "Pf", "Pf1 1\n-1\n" + px, "Pf\n0 1\n-1\n" + px,
      "Pf\n1 x\n-1\n" + px, "Pf\n-1 1\n-1\n" + px, "Pf\n99999999 1\n-1\n" + px,
      "Pf\n1 1\n0.0\n" + px, "Pf\n1 1\nabc\n" + px, "Pf\n1 1\nnan\n" + px, "Pf\n1 1\n-1",
      "Pf\n2 2\n-1\n" + px, "PF\n1 1\n-1\n" + px, "Pf\n1 1\n-1\n" + le32(0x7f800000u),
  };
  const std::string magic = le32(std::bit_cast<std::uint32_t>(kFloMagic));
  const std::vector<std::string> bad_flo = {
      "", magic, le32(std::bit_cast<std::uint32_t>(202021.0f)) + le32(1) + le32(1) + px + px,
      magic + le32(0) + le32(1), magic + le32(1) + le32(0), magic + le32(1) + le32(0xffffffffu),
      magic + le32(1u << 20) + le32(1), magic + le32(2) + le32(2) + std::string(24, '\0'),
      magic + le32(1) + le32(1) + px, magic + le32(1) + le32(1) + px + px + px,
      magic + le32(1) + le32(1) + le32(0x7fc00000u) + px,
  };
  auto rejected = [](const std::string& bytes, bool flo) {
    try {
      if (flo) {
        read_flo(bytes);
      } else {
        read_pfm(bytes);
      }
    } catch (const ParseError& e) {
      return e.offset() <= bytes.size() && std::strstr(e.what(), "offset") != nullptr;
    } catch (...) {
      return false;
    }
    return false;
  };
  std::size_t pfm_ok = 0, flo_ok = 0;
  for (const auto& b : bad_pfm) pfm_ok += rejected(b, false);
  for (const auto& b : bad_flo) flo_ok += rejected(b, true);
  r.check(pfm_ok == bad_pfm.size(), "malformed PFM accepted or unstructured");
  r.check(flo_ok == bad_flo.size(), "malformed FLO accepted or unstructured");
  r.note("malformed corpus: " + std::to_string(pfm_ok) + "/" + std::to_string(bad_pfm.size()) +
         " PFM and " + std::to_string(flo_ok) + "/" + std::to_string(bad_flo.size()) +
         " FLO rejected with byte offsets");
}

double parse_value(const std::string& text, const std::string& key) {
  const std::size_t at = text.find(key + "=");
  if (at == std::string::npos) return std::nan("");
  return std::strtod(text.c_str() + at + key.size() + 1, nullptr);
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

void toy_convergence(Report& r) {
  const auto t0 = Clock::now();
  const fs::path dir = testing::fresh_temp_dir("acceptance_toy");
  const fs::path root = dir / "data", camera = dir / "camera.cfg";
  for (int i = 0; i < 4; ++i) {
    const testing::SyntheticScene s = testing::random_scene(500 + static_cast<unsigned>(i), 48, 96);
    testing::write_scene_tree(root, "train", "scene_" + std::to_string(i), s, 2, 6);
    if (i == 0) testing::write_camera_file(camera, s.camera);
  }

  // Ground truth: library output, the CLI's files and the scalar oracle agree.
  const CameraConfig cam = parse_camera_config(read_file_bytes(camera));
  const auto records = index_dataset(root, "train");
  r.check(records.size() == 4, "expected 4 samples, indexed " + std::to_string(records.size()));
  const testing::RunResult gt = testing::run_command(
      cli() + " make-gt --root " + q(root) + " --camera " + q(camera) + " --out " + q(dir / "gt"));
  r.check(gt.code == 0 && gt.out == "written=4 failed=0\n", "make-gt: " + gt.out + gt.err);
  std::size_t valid = 0;
  for (const SampleRecord& rec : records) {
    const TensorF flow = load_flow_raster(rec.flow);
    const std::size_t h = flow.extent(1), w = flow.extent(2);
    const TensorF u({h, w}, std::vector<float>(flow.plane(0), flow.plane(0) + h * w));
    const TensorF v({h, w}, std::vector<float>(flow.plane(1), flow.plane(1) + h * w));
    const SceneFlowField oracle =
        testing::oracle_scene_flow(u, v, load_disparity_raster(rec.disparity_t, false),
                                   load_disparity_raster(rec.disparity_t1, false), cam.intrinsics);
    const SceneFlowField lib = load_target(rec, cam);
    const TensorF written =
        read_pfm_file(dir / "gt" / "train" / rec.scene / "scene_flow" / "0006.pfm").data;
    r.check(same_bits(lib.flow, oracle.flow) && lib.valid == oracle.valid,
            rec.scene + ": ground truth differs from the oracle");
    r.check(same_bits(written, oracle.flow), rec.scene + ": make-gt output differs from the oracle");
    valid += oracle.valid_count();
  }
  r.note("4 samples at 48x96, " + std::to_string(valid) + " valid pixels, ground truth matches the oracle");

  const std::string common = cli() + " train --root " + q(root) + " --camera " + q(camera) +
                             " --lr 1e-3 --seed 7 --out ";
  auto eval = [&](const fs::path& model) {
    const testing::RunResult e = testing::run_command(cli() + " eval --checkpoint " + q(model) +
                                                      " --root " + q(root) + " --camera " +
                                                      q(camera) + " --split train");
    r.check(e.code == 0, "eval failed: " + e.err);
    return parse_value(e.out, "epe");
  };

  // One epoch under the same seed reproduces the first epoch of the long run
  // exactly (the schedule starts at lr0 whatever the decay).
  const testing::RunResult one = testing::run_command(common + q(dir / "epoch1") + " --epochs 1");
  r.check(one.code == 0, "train --epochs 1 failed: " + one.err);
  const double epe1 = eval(dir / "epoch1" / "model.sedn");

  const auto t_train = Clock::now();
  const testing::RunResult a = testing::run_command(common + q(dir / "run_a") + " --epochs 200");
  const double train_secs = seconds_since(t_train);
  r.check(a.code == 0, "train --epochs 200 failed: " + a.err);
  const double epe200 = eval(dir / "run_a" / "model.sedn");
  const std::string log = read_file_bytes(dir / "run_a" / "train.log");
  r.check(first_line(log) == first_line(read_file_bytes(dir / "epoch1" / "train.log")),
          "first epoch of the long run differs from the one-epoch run");
  const double loss1 = parse_value(first_line(log), "train_loss");
  const double loss200 = parse_value(log.substr(log.rfind("epoch=200")), "train_loss");
  r.note("mean EPE after epoch 1 " + fmt("%.6f", epe1) + ", after epoch 200 " +
         fmt("%.6f", epe200) + " (ratio " + fmt("%.3f", epe200 / epe1) + ")");
  r.note("training loss epoch 1 " + fmt("%.6f", loss1) + ", epoch 200 " + fmt("%.6f", loss200));
  r.check(epe200 < 0.5 * epe1, "EPE ratio " + fmt("%.3f", epe200 / epe1) + " is not below 0.5");
  r.check(train_secs <= 900, "200-epoch run took " + fmt("%.0f s", train_secs));
  r.note("200-epoch training run: " + fmt("%.1f s", train_secs) + " on " +
         std::to_string(thread_count()) + " thread(s)");

  const testing::RunResult b = testing::run_command(common + q(dir / "run_b") + " --epochs 200");
  r.check(b.code == 0, "second training run failed: " + b.err);
  const bool same_model =
      read_file_bytes(dir / "run_a" / "model.sedn") == read_file_bytes(dir / "run_b" / "model.sedn");
  const bool same_log = log == read_file_bytes(dir / "run_b" / "train.log");
  r.check(same_model && same_log, "second run with the same seed is not byte-identical");
  r.note(std::string("rerun with the same seed: model.sedn and train.log ") +
         (same_model && same_log ? "byte-identical" : "DIFFER"));
  r.note("criterion runtime " + fmt("%.1f s", seconds_since(t0)));
}

void inference_latency(Report& r) {
  const fs::path dir = testing::fresh_temp_dir("acceptance_latency");
  save_checkpoint(dir / "model.sedn", build_network<float>(NetworkSpec::sceneednet(), 8));
  struct Case {
    std::size_t h, w;
    double budget;
  };
  for (const Case c : {Case{136, 240, 10.0}, Case{540, 960, 600.0}}) {
    const std::string tag = std::to_string(c.w) + "x" + std::to_string(c.h);
    const testing::SyntheticScene s = testing::random_scene(9, c.h, c.w);
    testing::write_scene_tree(dir / tag, "test", "s", s, 2, 0);
    const fs::path sd = dir / tag / "test" / "s";
    const fs::path out = dir / (tag + ".pfm");
    const auto t0 = Clock::now();
    const testing::RunResult res = testing::run_command(
        cli() + " infer --checkpoint " + q(dir / "model.sedn") + " --left-t " +
        q(sd / "left" / "0000.png") + " --right-t " + q(sd / "right" / "0000.png") +
        " --left-t1 " + q(sd / "left" / "0001.png") + " --right-t1 " +
        q(sd / "right" / "0001.png") + " --out " + q(out));
    const double secs = seconds_since(t0);
    r.check(res.code == 0, "infer at " + tag + " failed: " + res.err);
    const std::string header = "PF\n" + std::to_string(c.w) + " " + std::to_string(c.h) + "\n";
    r.check(res.code == 0 && read_file_bytes(out).rfind(header, 0) == 0,
            "unexpected PFM header at " + tag);
    r.check(secs < c.budget, "infer at " + tag + " took " + fmt("%.1f s", secs));
    r.note("infer " + std::to_string(c.h) + "x" + std::to_string(c.w) +
           " (process start, checkpoint load, decode, forward, PFM write): " +
           fmt("%.2f s", secs) + ", budget " + fmt("%.0f s", c.budget));
  }
}

void checkpoint_round_trip(Report& r) {
  // Parameters moved off their initialization by a few training steps.
  Network<float> net = build_network<float>(NetworkSpec::sceneednet(), 10);
  TrainConfig cfg;
  cfg.lr0 = 1e-3;
  cfg.epochs = 2;
  const InMemorySource data({testing::make_sample(testing::random_scene(11, 48, 96), 0)});
  const FitResult fitted = fit(net, data, cfg);
  const fs::path dir = testing::fresh_temp_dir("acceptance_checkpoint");
  save_checkpoint(dir / "net.sedn", net, &fitted.optimizer.velocity);
  const Checkpoint cp = load_checkpoint(dir / "net.sedn");
  r.check(cp.network.epoch() == 2, "epoch not restored");
  r.check(cp.momentum.has_value(), "momentum not restored");
  Rng rng(12);
  for (auto [h, w] : {std::pair<std::size_t, std::size_t>{48, 96}, {96, 192}, {37, 61}}) {
    const TensorF x = testing::random_tensor<float>({12, h, w}, rng, -0.5, 0.5);
    const bool same = same_bits(forward(net, x), forward(cp.network, x));
    const std::string tag = std::to_string(h) + "x" + std::to_string(w);
    r.check(same, "forward differs after reload at " + tag);
    r.note("save -> load -> forward at " + tag + ": " + (same ? "bit-identical" : "DIFFERS"));
  }
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Report&)> run;
};

}  // namespace
}  // namespace sceneednet

int main(int argc, char** argv) {
  using namespace sceneednet;
  CLI::App app{"SceneEDNet acceptance suite"};
  std::vector<int> selected;
  app.add_option("criteria", selected, "Criterion numbers to run (default: all)")
      ->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);
  const std::set<int> only(selected.begin(), selected.end());

  const std::vector<Criterion> criteria = {
      {1, "shape fidelity", shape_fidelity},
      {2, "gradient correctness", gradient_correctness},
      {3, "geometry oracle", geometry_oracle},
      {4, "format fidelity", format_fidelity},
      {5, "toy convergence", toy_convergence},
      {6, "inference latency", inference_latency},
      {7, "checkpoint round trip", checkpoint_round_trip},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    std::printf("criterion %d (%s)\n", c.id, c.title);
    std::fflush(stdout);
    Report report;
    try {
      c.run(report);
    } catch (const std::exception& e) {
      report.check(false, std::string("exception: ") + e.what());
    }
    for (const auto& f : report.failures()) std::printf("    failed: %s\n", f.c_str());
    std::printf("%s criterion %d: %s\n", report.passed() ? "PASS" : "FAIL", c.id, c.title);
    std::fflush(stdout);
    failed += !report.passed();
  }
  return failed == 0 ? 0 : 1;
}
