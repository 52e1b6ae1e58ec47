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

#include "core/flo.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>

#include "core/pfm.hpp"

namespace sceneednet {
namespace {

constexpr std::int32_t kMaxExtent = 1 << 16;

std::uint32_t load_le32(const char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap32(v);
  return v;
}

void store_le32(char* p, std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap32(v);
  std::memcpy(p, &v, 4);
}

}  // namespace

TensorF read_flo(std::string_view bytes) {
  if (bytes.size() < 12) {
    throw ParseError(bytes.size(), "FLO: truncated header, need 12 bytes, found " +
                                       std::to_string(bytes.size()));
  }
  const float magic = std::bit_cast<float>(load_le32(bytes.data()));
  if (magic != kFloMagic) {
    std::ostringstream msg;
    msg.precision(9);
    msg << "FLO: wrong magic " << magic << ", expected 202021.25";
    throw ParseError(0, msg.str());
  }
  const auto width = static_cast<std::int32_t>(load_le32(bytes.data() + 4));
  const auto height = static_cast<std::int32_t>(load_le32(bytes.data() + 8));
  if (width < 1 || width > kMaxExtent) {
    throw ParseError(4, "FLO: illegal width " + std::to_string(width));
  }
  if (height < 1 || height > kMaxExtent) {
    throw ParseError(8, "FLO: illegal height " + std::to_string(height));
  }
  const std::size_t w = static_cast<std::size_t>(width), h = static_cast<std::size_t>(height);
  const std::size_t expected = 12 + w * h * 8;
  if (bytes.size() < expected) {
    throw ParseError(bytes.size(), "FLO: truncated raster, expected " +
                                       std::to_string(expected - 12) + " bytes, found " +
                                       std::to_string(bytes.size() - 12));
  }
  if (bytes.size() > expected) {
    throw ParseError(expected, "FLO: " + std::to_string(bytes.size() - expected) +
                                   " trailing bytes after raster");
  }
  TensorF out({2, h, w});
  const char* src = bytes.data() + 12;
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j) {
      const std::size_t idx = (i * w + j) * 2;
      const float u = std::bit_cast<float>(load_le32(src + idx * 4));
      const float v = std::bit_cast<float>(load_le32(src + idx * 4 + 4));
      if (!std::isfinite(u) || !std::isfinite(v)) {
        throw ParseError(12 + idx * 4, "FLO: non-finite flow sample");
      }
      out.at(0, i, j) = u;
      out.at(1, i, j) = v;
    }
  return out;
}

std::string write_flo(const TensorF& flow) {
  require_rank(flow, 3, "write_flo");
  if (flow.extent(0) != 2) {
    throw ShapeError("channels", "write_flo: flow must have 2 channels, got " +
                                     std::to_string(flow.extent(0)));
  }
  require_finite(flow, "write_flo");
  const std::size_t h = flow.extent(1), w = flow.extent(2);
  std::string out(12 + w * h * 8, '\0');
  store_le32(out.data(), std::bit_cast<std::uint32_t>(kFloMagic));
  store_le32(out.data() + 4, static_cast<std::uint32_t>(w));
  store_le32(out.data() + 8, static_cast<std::uint32_t>(h));
  char* dst = out.data() + 12;
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j) {
      store_le32(dst, std::bit_cast<std::uint32_t>(flow.at(0, i, j)));
      store_le32(dst + 4, std::bit_cast<std::uint32_t>(flow.at(1, i, j)));
      dst += 8;
    }
  return out;
}

TensorF read_flo_file(const std::filesystem::path& path) {
  try {
    return read_flo(read_file_bytes(path));
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

void write_flo_file(const std::filesystem::path& path, const TensorF& flow) {
  write_file_bytes(path, write_flo(flow));
}

}  // namespace sceneednet
