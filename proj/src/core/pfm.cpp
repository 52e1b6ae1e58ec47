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

#include "core/pfm.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace sceneednet {
namespace {

constexpr std::size_t kMaxExtent = 1u << 16;

bool is_space(char c) {
  return c == ' ' || c == '\n' || c == '\r' || c == '\t';
}

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }

  void skip_space(const char* after) {
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && is_space(bytes_[pos_])) ++pos_;
    if (pos_ == start) {
      throw ParseError(pos_, std::string("PFM: expected whitespace after ") + after);
    }
  }

  std::string_view token(const char* what) {
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !is_space(bytes_[pos_])) ++pos_;
    if (pos_ == start) throw ParseError(start, std::string("PFM: missing ") + what);
    return bytes_.substr(start, pos_ - start);
  }

  std::size_t extent(const char* what) {
    const std::size_t start = pos_;
    std::string_view t = token(what);
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || v == 0 || v > kMaxExtent) {
      throw ParseError(start, std::string("PFM: invalid ") + what + " '" +
                                  std::string(t) + "'");
    }
    return v;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t load_u32(const char* p, bool little) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  if (little != (std::endian::native == std::endian::little)) v = __builtin_bswap32(v);
  return v;
}

void store_u32(char* p, std::uint32_t v, bool little) {
  if (little != (std::endian::native == std::endian::little)) v = __builtin_bswap32(v);
  std::memcpy(p, &v, 4);
}

std::string format_scale(float scale) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), scale);
  std::string s(buf, end);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

PfmImage read_pfm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != 'F' && bytes[1] != 'f')) {
    throw ParseError(0, "PFM: bad magic, expected 'PF' or 'Pf'");
  }
  const std::size_t channels = bytes[1] == 'F' ? 3 : 1;
  HeaderReader r(bytes);
  if (r.token("magic").size() != 2) throw ParseError(2, "PFM: expected whitespace after magic");
  r.skip_space("magic");
  const std::size_t width = r.extent("width");
  r.skip_space("width");
  const std::size_t height = r.extent("height");
  r.skip_space("height");
  const std::size_t scale_at = r.pos();
  std::string_view scale_text = r.token("scale");
  float scale = 0;
  auto [p, ec] = std::from_chars(scale_text.data(), scale_text.data() + scale_text.size(), scale);
  if (ec != std::errc() || p != scale_text.data() + scale_text.size() ||
      !std::isfinite(scale) || scale == 0.0f) {
    throw ParseError(scale_at, "PFM: scale must be a finite non-zero number, got '" +
                                   std::string(scale_text) + "'");
  }
  if (r.pos() >= bytes.size() || !is_space(bytes[r.pos()])) {
    throw ParseError(r.pos(), "PFM: expected a single whitespace byte after scale");
  }
  const std::size_t data_at = r.pos() + 1;
  const bool little = scale < 0;

  const std::size_t count = width * height * channels;
  const std::size_t available = bytes.size() - data_at;
  if (available < count * 4) {
    throw ParseError(bytes.size(), "PFM: truncated raster, expected " +
                                       std::to_string(count * 4) + " bytes, found " +
                                       std::to_string(available));
  }
  PfmImage out{TensorF({channels, height, width}), scale};
  const char* src = bytes.data() + data_at;
  for (std::size_t fr = 0; fr < height; ++fr) {
    const std::size_t row = height - 1 - fr;
    for (std::size_t x = 0; x < width; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        const std::size_t idx = (fr * width + x) * channels + c;
        const float v = std::bit_cast<float>(load_u32(src + idx * 4, little));
        if (!std::isfinite(v)) {
          throw ParseError(data_at + idx * 4, "PFM: non-finite sample");
        }
        out.data.at(c, row, x) = v;
      }
    }
  }
  return out;
}

std::string write_pfm(const TensorF& data, float scale) {
  require_rank(data, 3, "write_pfm");
  const std::size_t channels = data.extent(0), height = data.extent(1),
                    width = data.extent(2);
  if (channels != 1 && channels != 3) {
    throw ShapeError("channels", "write_pfm: PFM holds 1 or 3 channels, got " +
                                     std::to_string(channels));
  }
  if (!(scale != 0.0f) || !std::isfinite(scale)) {
    throw InvalidArgument("write_pfm: scale must be finite and non-zero");
  }
  require_finite(data, "write_pfm");
  const bool little = scale < 0;
  std::string out = std::string(channels == 3 ? "PF" : "Pf") + "\n" +
                    std::to_string(width) + " " + std::to_string(height) + "\n" +
                    format_scale(scale) + "\n";
  const std::size_t header = out.size();
  out.resize(header + width * height * channels * 4);
  char* dst = out.data() + header;
  for (std::size_t fr = 0; fr < height; ++fr) {
    const std::size_t row = height - 1 - fr;
    for (std::size_t x = 0; x < width; ++x)
      for (std::size_t c = 0; c < channels; ++c) {
        store_u32(dst, std::bit_cast<std::uint32_t>(data.at(c, row, x)), little);
        dst += 4;
      }
  }
  return out;
}

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return ss.str();
}

void write_file_bytes(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

PfmImage read_pfm_file(const std::filesystem::path& path) {
  try {
    return read_pfm(read_file_bytes(path));
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

void write_pfm_file(const std::filesystem::path& path, const TensorF& data,
                    float scale) {
  write_file_bytes(path, write_pfm(data, scale));
}

}  // namespace sceneednet
