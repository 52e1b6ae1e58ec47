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

// Checkpoint layout (little-endian):
//
//   char[4]  "SEDN"
//   u32      format version
//   u32      layer count, then per layer:
//              u16 name length, name bytes, u8 kind, u32 in_ch, u32 out_ch,
//              u8 activation, f64 alpha
//   u32      epoch
//   per convolution: u64 n, n x f32 weights; u64 m, m x f32 biases
//   u8       momentum present; if 1, the same blocks again for the velocity

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "core/network.hpp"
#include "core/pfm.hpp"

namespace sceneednet {
namespace {

class Writer {
 public:
  void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  template <typename U>
  void le(U v) {
    if constexpr (std::endian::native == std::endian::big) v = std::bit_cast<U>(swap(v));
    bytes(&v, sizeof(U));
  }
  void f32(float v) { le(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  std::string take() { return std::move(out_); }

 private:
  template <typename U>
  static U swap(U v) {
    unsigned char b[sizeof(U)];
    std::memcpy(b, &v, sizeof(U));
    for (std::size_t i = 0; i < sizeof(U) / 2; ++i) std::swap(b[i], b[sizeof(U) - 1 - i]);
    std::memcpy(&v, b, sizeof(U));
    return v;
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == in_.size(); }

  void need(std::size_t n, const char* what) {
    if (in_.size() - pos_ < n) {
      throw ParseError(in_.size(), std::string("checkpoint: truncated while reading ") + what);
    }
  }
  std::string_view bytes(std::size_t n, const char* what) {
    need(n, what);
    std::string_view v = in_.substr(pos_, n);
    pos_ += n;
    return v;
  }
  template <typename U>
  U le(const char* what) {
    std::string_view b = bytes(sizeof(U), what);
    unsigned char buf[sizeof(U)];
    std::memcpy(buf, b.data(), sizeof(U));
    if constexpr (std::endian::native == std::endian::big) {
      for (std::size_t i = 0; i < sizeof(U) / 2; ++i) std::swap(buf[i], buf[sizeof(U) - 1 - i]);
    }
    U v;
    std::memcpy(&v, buf, sizeof(U));
    return v;
  }
  float f32(const char* what) { return std::bit_cast<float>(le<std::uint32_t>(what)); }
  double f64(const char* what) { return std::bit_cast<double>(le<std::uint64_t>(what)); }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'S', 'E', 'D', 'N'};

void write_blocks(Writer& w, const std::vector<const Tensor<float>*>& weights,
                  const std::vector<const std::vector<float>*>& biases) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    w.le<std::uint64_t>(weights[i]->size());
    for (float v : weights[i]->data()) w.f32(v);
    w.le<std::uint64_t>(biases[i]->size());
    for (float v : *biases[i]) w.f32(v);
  }
}

ParameterSet<float> read_blocks(Reader& r, const NetworkSpec& spec) {
  ParameterSet<float> p;
  for (const LayerSpec& l : spec.layers) {
    if (!l.is_conv()) continue;
    const std::size_t at = r.pos();
    const auto n = r.le<std::uint64_t>("weight count");
    const std::uint64_t expected = l.out_ch * l.in_ch * kKernelSize * kKernelSize;
    if (n != expected) {
      throw ParseError(at, "checkpoint: spec mismatch, layer '" + l.name + "' stores " +
                               std::to_string(n) + " weights, expected " +
                               std::to_string(expected));
    }
    r.need(n * 4, "weights");
    Tensor<float> wt({l.out_ch, l.in_ch, kKernelSize, kKernelSize});
    for (auto& v : wt.data()) v = r.f32("weights");
    const std::size_t bat = r.pos();
    const auto m = r.le<std::uint64_t>("bias count");
    if (m != l.out_ch) {
      throw ParseError(bat, "checkpoint: spec mismatch, layer '" + l.name + "' bias count " +
                                std::to_string(m));
    }
    std::vector<float> b(l.out_ch);
    for (auto& v : b) v = r.f32("biases");
    if (!wt.all_finite() ||
        std::any_of(b.begin(), b.end(), [](float v) { return !std::isfinite(v); })) {
      throw ParseError(at, "checkpoint: non-finite parameter in layer '" + l.name + "'");
    }
    p.weights.push_back(std::move(wt));
    p.biases.push_back(std::move(b));
  }
  return p;
}

}  // namespace

std::string serialize_checkpoint(const Network<float>& net,
                                 const ParameterSet<float>* momentum) {
  Writer w;
  w.bytes(kMagic, 4);
  w.le<std::uint32_t>(kCheckpointVersion);
  const NetworkSpec& spec = net.spec();
  w.le<std::uint32_t>(static_cast<std::uint32_t>(spec.layers.size()));
  for (const LayerSpec& l : spec.layers) {
    w.le<std::uint16_t>(static_cast<std::uint16_t>(l.name.size()));
    w.bytes(l.name.data(), l.name.size());
    w.le<std::uint8_t>(static_cast<std::uint8_t>(l.kind));
    w.le<std::uint32_t>(static_cast<std::uint32_t>(l.in_ch));
    w.le<std::uint32_t>(static_cast<std::uint32_t>(l.out_ch));
    w.le<std::uint8_t>(l.activation ? 1 : 0);
    w.f64(l.alpha);
  }
  w.le<std::uint32_t>(net.epoch());
  std::vector<const Tensor<float>*> weights;
  std::vector<const std::vector<float>*> biases;
  for (std::size_t i = 0; i < net.conv_count(); ++i) {
    weights.push_back(&net.conv(i).weights);
    biases.push_back(&net.conv(i).bias);
  }
  write_blocks(w, weights, biases);
  if (momentum) {
    if (momentum->weights.size() != net.conv_count() ||
        momentum->biases.size() != net.conv_count()) {
      throw ShapeError("momentum", "checkpoint: momentum buffers do not match the network");
    }
    w.le<std::uint8_t>(1);
    weights.clear();
    biases.clear();
    for (std::size_t i = 0; i < net.conv_count(); ++i) {
      if (momentum->weights[i].shape() != net.conv(i).weights.shape() ||
          momentum->biases[i].size() != net.conv(i).bias.size()) {
        throw ShapeError("momentum", "checkpoint: momentum buffer shape mismatch");
      }
      weights.push_back(&momentum->weights[i]);
      biases.push_back(&momentum->biases[i]);
    }
    write_blocks(w, weights, biases);
  } else {
    w.le<std::uint8_t>(0);
  }
  return w.take();
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
  Reader r(bytes);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ParseError(0, "checkpoint: bad magic, expected 'SEDN'");
  }
  r.bytes(4, "magic");
  const auto version = r.le<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw ParseError(4, "checkpoint: unsupported format version " + std::to_string(version) +
                            " (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  NetworkSpec spec;
  const std::size_t count_at = r.pos();
  const auto layers = r.le<std::uint32_t>("layer count");
  if (layers == 0 || layers > 64) {
    throw ParseError(count_at, "checkpoint: implausible layer count " + std::to_string(layers));
  }
  for (std::uint32_t i = 0; i < layers; ++i) {
    LayerSpec l;
    const auto len = r.le<std::uint16_t>("layer name length");
    l.name = std::string(r.bytes(len, "layer name"));
    const std::size_t kind_at = r.pos();
    const auto kind = r.le<std::uint8_t>("layer kind");
    if (kind > static_cast<std::uint8_t>(LayerKind::kCrop)) {
      throw ParseError(kind_at, "checkpoint: unknown layer kind " + std::to_string(kind));
    }
    l.kind = static_cast<LayerKind>(kind);
    l.in_ch = r.le<std::uint32_t>("in_ch");
    l.out_ch = r.le<std::uint32_t>("out_ch");
    l.activation = r.le<std::uint8_t>("activation") != 0;
    l.alpha = r.f64("alpha");
    spec.layers.push_back(std::move(l));
  }
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(count_at, std::string("checkpoint: spec mismatch: ") + e.what());
  }
  const auto epoch = r.le<std::uint32_t>("epoch");
  ParameterSet<float> params = read_blocks(r, spec);

  std::vector<ConvParams<float>> convs;
  std::size_t ci = 0;
  for (const LayerSpec& l : spec.layers) {
    if (!l.is_conv()) continue;
    convs.push_back({std::move(params.weights[ci]), std::move(params.biases[ci]), l.stride(), 1});
    ++ci;
  }
  Checkpoint cp{Network<float>(spec, std::move(convs)), std::nullopt};
  cp.network.set_epoch(epoch);

  const std::size_t flag_at = r.pos();
  const auto has_momentum = r.le<std::uint8_t>("momentum flag");
  if (has_momentum > 1) throw ParseError(flag_at, "checkpoint: bad momentum flag");
  if (has_momentum) cp.momentum = read_blocks(r, spec);
  if (!r.done()) {
    throw ParseError(r.pos(), "checkpoint: trailing bytes after parameter blocks");
  }
  return cp;
}

void save_checkpoint(const std::filesystem::path& path, const Network<float>& net,
                     const ParameterSet<float>* momentum) {
  write_file_bytes(path, serialize_checkpoint(net, momentum));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  try {
    return deserialize_checkpoint(read_file_bytes(path));
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

}  // namespace sceneednet
