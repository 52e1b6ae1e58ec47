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

#include "core/camera.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "core/error.hpp"

namespace sceneednet {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view value, std::size_t offset,
                    std::string_view key) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw ParseError(offset, "camera config: value for '" + std::string(key) +
                                 "' is not a finite number: '" +
                                 std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view value, std::size_t offset) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ParseError(offset, "camera config: expected a boolean, got '" +
                               std::string(value) + "'");
}

}  // namespace

void CameraIntrinsics::validate() const {
  if (!(fx > 0) || !std::isfinite(fx)) throw InvalidArgument("camera: fx must be positive");
  if (!(fy > 0) || !std::isfinite(fy)) throw InvalidArgument("camera: fy must be positive");
  if (!(baseline > 0) || !std::isfinite(baseline))
    throw InvalidArgument("camera: baseline must be positive");
  if (!std::isfinite(cx) || !std::isfinite(cy))
    throw InvalidArgument("camera: principal point must be finite");
}

CameraConfig parse_camera_config(std::string_view text) {
  CameraConfig cfg;
  std::map<std::string, bool> seen;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(offset, "camera config: expected key = value, got '" +
                                     std::string(line) + "'");
      }
      const std::string key(trim(line.substr(0, eq)));
      const std::string_view value = trim(line.substr(eq + 1));
      if (seen[key]) throw ParseError(offset, "camera config: duplicate key '" + key + "'");
      seen[key] = true;
      if (key == "fx") cfg.intrinsics.fx = parse_number(value, offset, key);
      else if (key == "fy") cfg.intrinsics.fy = parse_number(value, offset, key);
      else if (key == "cx") cfg.intrinsics.cx = parse_number(value, offset, key);
      else if (key == "cy") cfg.intrinsics.cy = parse_number(value, offset, key);
      else if (key == "baseline") cfg.intrinsics.baseline = parse_number(value, offset, key);
      else if (key == "negate_disparity") cfg.negate_disparity = parse_bool(value, offset);
      else if (key == "disparity_source") {
        if (value == "next_frame") cfg.disparity_source = NextDisparitySource::kNextFrame;
        else if (value == "change") cfg.disparity_source = NextDisparitySource::kDisparityChange;
        else throw ParseError(offset, "camera config: disparity_source must be next_frame or change");
      } else {
        throw ParseError(offset, "camera config: unknown key '" + key + "'");
      }
    }
    offset = end + 1;
  }
  for (const char* key : {"fx", "fy", "cx", "cy", "baseline"}) {
    if (!seen[key]) throw ParseError(text.size(), std::string("camera config: missing key '") + key + "'");
  }
  cfg.intrinsics.validate();
  return cfg;
}

CameraConfig load_camera_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open camera config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_camera_config(ss.str());
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

}  // namespace sceneednet
