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

#include "core/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstring>
#include <string>

#include "core/pfm.hpp"

namespace sceneednet {
namespace {

RgbImage decode_png(const std::string& bytes, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw DataError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  RgbImage out{image.width, image.height, {}};
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw DataError("cannot decode PNG " + path.string() + ": " + msg);
  }
  return out;
}

// Reads one whitespace-delimited unsigned header field of a PNM file,
// skipping '#' comments.
std::size_t pnm_field(const std::string& bytes, std::size_t& pos,
                      const std::filesystem::path& path) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  std::size_t v = 0, digits = 0;
  while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9' && digits < 9) {
    v = v * 10 + static_cast<std::size_t>(bytes[pos++] - '0');
    ++digits;
  }
  if (digits == 0) throw ParseError(pos, path.string() + ": malformed PNM header");
  return v;
}

RgbImage decode_pnm(const std::string& bytes, const std::filesystem::path& path) {
  const bool gray = bytes[1] == '5';
  std::size_t pos = 2;
  const std::size_t w = pnm_field(bytes, pos, path);
  const std::size_t h = pnm_field(bytes, pos, path);
  const std::size_t maxval = pnm_field(bytes, pos, path);
  if (w == 0 || h == 0) throw ParseError(pos, path.string() + ": PNM with zero extent");
  if (maxval == 0 || maxval > 255) {
    throw ParseError(pos, path.string() + ": only 8-bit PNM is supported");
  }
  ++pos;  // single whitespace byte before the raster
  const std::size_t channels = gray ? 1 : 3;
  if (bytes.size() < pos + w * h * channels) {
    throw ParseError(bytes.size(), path.string() + ": truncated PNM raster");
  }
  RgbImage out{w, h, std::vector<std::uint8_t>(w * h * 3)};
  for (std::size_t i = 0; i < w * h; ++i)
    for (std::size_t c = 0; c < 3; ++c) {
      unsigned v = static_cast<unsigned char>(bytes[pos + i * channels + (gray ? 0 : c)]);
      out.pixels[i * 3 + c] = static_cast<std::uint8_t>(maxval == 255 ? v : (v * 255 + maxval / 2) / maxval);
    }
  return out;
}

}  // namespace

RgbImage read_rgb_image(const std::filesystem::path& path) {
  const std::string bytes = read_file_bytes(path);
  static const unsigned char kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSig, 8) == 0) {
    return decode_png(bytes, path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '6' || bytes[1] == '5')) {
    return decode_pnm(bytes, path);
  }
  throw DataError("unsupported image format: " + path.string());
}

void write_png(const std::filesystem::path& path, const RgbImage& img) {
  if (img.pixels.size() != img.width * img.height * 3 || img.width == 0 || img.height == 0) {
    throw InvalidArgument("write_png: pixel buffer does not match dimensions");
  }
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels.data(), 0, nullptr)) {
    throw IoError("write_png: " + std::string(image.message));
  }
  std::string buffer(size, '\0');
  if (!png_image_write_to_memory(&image, buffer.data(), &size, 0, img.pixels.data(), 0, nullptr)) {
    throw IoError("write_png: " + std::string(image.message));
  }
  buffer.resize(size);
  write_file_bytes(path, buffer);
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  if (img.pixels.size() != img.width * img.height * 3) {
    throw InvalidArgument("write_ppm: pixel buffer does not match dimensions");
  }
  std::string out = "P6\n" + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  write_file_bytes(path, out);
}

TensorF normalize_image(const RgbImage& image) {
  TensorF out({3, image.height, image.width});
  for (std::size_t i = 0; i < image.height; ++i)
    for (std::size_t j = 0; j < image.width; ++j)
      for (std::size_t c = 0; c < 3; ++c)
        out.at(c, i, j) =
            static_cast<float>(image.pixels[(i * image.width + j) * 3 + c]) / 255.0f - 0.5f;
  return out;
}

}  // namespace sceneednet
