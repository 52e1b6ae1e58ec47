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

// Portable float map:
//
//   "PF" (3 channels) or "Pf" (1 channel), whitespace,
//   width, whitespace, height, whitespace,
//   scale, one whitespace byte,
//   width * height * channels float32 values, pixel-interleaved, rows stored
//   bottom-to-top. scale < 0 means little-endian samples, scale > 0
//   big-endian.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "core/tensor.hpp"

namespace sceneednet {

struct PfmImage {
  TensorF data;  // [C,H,W], top row first
  float scale = -1.0f;
};

PfmImage read_pfm(std::string_view bytes);

/// Serializes a [1,H,W] or [3,H,W] tensor. The sign of `scale` selects the
/// byte order; zero is rejected.
std::string write_pfm(const TensorF& data, float scale = -1.0f);

PfmImage read_pfm_file(const std::filesystem::path& path);
void write_pfm_file(const std::filesystem::path& path, const TensorF& data,
                    float scale = -1.0f);

/// Reads a whole file into memory; throws IoError.
std::string read_file_bytes(const std::filesystem::path& path);
/// Writes bytes, creating parent directories; throws IoError.
void write_file_bytes(const std::filesystem::path& path, std::string_view bytes);

}  // namespace sceneednet
