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

#include "core/dataset.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>

#include "core/flo.hpp"
#include "core/image_io.hpp"
#include "core/kernels.hpp"
#include "core/log.hpp"
#include "core/pfm.hpp"

namespace sceneednet {
namespace fs = std::filesystem;
namespace {

std::optional<int> frame_number(const fs::path& p) {
  const std::string stem = p.stem().string();
  auto first = std::find_if(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (first == stem.end()) return std::nullopt;
  auto last = std::find_if(first, stem.end(), [](char c) { return c < '0' || c > '9'; });
  if (last - first > 9) return std::nullopt;
  return std::stoi(std::string(first, last));
}

using FrameMap = std::map<int, fs::path>;

FrameMap list_frames(const fs::path& dir, std::initializer_list<const char*> extensions) {
  FrameMap frames;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return frames;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (std::none_of(extensions.begin(), extensions.end(),
                     [&](const char* e) { return ext == e; }))
      continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    if (auto n = frame_number(f)) frames.emplace(*n, f);  // first in sort order wins
  }
  return frames;
}

const fs::path* find(const FrameMap& m, int frame) {
  auto it = m.find(frame);
  return it == m.end() ? nullptr : &it->second;
}

void require_resolution(const TensorF& t, std::size_t h, std::size_t w,
                        const fs::path& file) {
  const std::size_t th = t.extent(t.rank() - 2), tw = t.extent(t.rank() - 1);
  if (th != h || tw != w) {
    throw DataError("resolution mismatch in " + file.string() + ": " +
                    std::to_string(tw) + "x" + std::to_string(th) + ", expected " +
                    std::to_string(w) + "x" + std::to_string(h));
  }
}

TensorF plane_of(const TensorF& t, std::size_t c) {
  const std::size_t h = t.extent(1), w = t.extent(2);
  return TensorF({h, w}, std::vector<float>(t.plane(c), t.plane(c) + h * w));
}

}  // namespace

std::vector<SampleRecord> index_dataset(const fs::path& root, const std::string& split) {
  const fs::path split_dir = root / split;
  std::error_code ec;
  if (!fs::is_directory(split_dir, ec)) {
    throw DataError("dataset split directory not found: " + split_dir.string());
  }
  std::vector<std::string> scenes;
  for (const auto& entry : fs::directory_iterator(split_dir, ec)) {
    if (entry.is_directory()) scenes.push_back(entry.path().filename().string());
  }
  std::sort(scenes.begin(), scenes.end());

  std::vector<SampleRecord> records;
  for (const auto& scene : scenes) {
    const fs::path dir = split_dir / scene;
    const FrameMap left = list_frames(dir / "left", {".png", ".ppm"});
    const FrameMap right = list_frames(dir / "right", {".png", ".ppm"});
    const FrameMap flow = list_frames(dir / "flow" / "left" / "into_future", {".pfm", ".flo"});
    const FrameMap disp = list_frames(dir / "disparity" / "left", {".pfm"});
    const FrameMap change = list_frames(dir / "disparity_change" / "left" / "into_future", {".pfm"});

    // Frames known to any source; a pair needs both endpoints.
    std::vector<int> frames;
    for (const FrameMap* m : {&left, &right, &disp}) {
      for (const auto& [n, _] : *m) frames.push_back(n);
    }
    std::sort(frames.begin(), frames.end());
    frames.erase(std::unique(frames.begin(), frames.end()), frames.end());

    for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
      const int f0 = frames[i], f1 = frames[i + 1];
      if (f1 != f0 + 1) continue;
      const std::array<std::pair<const fs::path*, const char*>, 7> needed = {{
          {find(left, f0), "left image at t"},
          {find(right, f0), "right image at t"},
          {find(left, f1), "left image at t+1"},
          {find(right, f1), "right image at t+1"},
          {find(flow, f0), "forward flow"},
          {find(disp, f0), "disparity at t"},
          {find(disp, f1), "disparity at t+1"},
      }};
      auto missing = std::find_if(needed.begin(), needed.end(),
                                  [](const auto& n) { return n.first == nullptr; });
      if (missing != needed.end()) {
        log_warning("skipping " + split + "/" + scene + " frame " + std::to_string(f0) +
                    ": missing " + missing->second);
        continue;
      }
      SampleRecord rec;
      rec.left_t = *needed[0].first;
      rec.right_t = *needed[1].first;
      rec.left_t1 = *needed[2].first;
      rec.right_t1 = *needed[3].first;
      rec.flow = *needed[4].first;
      rec.disparity_t = *needed[5].first;
      rec.disparity_t1 = *needed[6].first;
      if (const fs::path* c = find(change, f0)) rec.disparity_change = *c;
      rec.split = split;
      rec.scene = scene;
      rec.frame = f0;
      records.push_back(std::move(rec));
    }
  }
  if (records.empty()) {
    throw DataError("no complete frame pairs found under " + split_dir.string());
  }
  return records;
}

TensorF load_network_input(const fs::path& left_t, const fs::path& right_t,
                           const fs::path& left_t1, const fs::path& right_t1) {
  const std::array<const fs::path*, 4> paths = {&left_t, &right_t, &left_t1, &right_t1};
  std::vector<TensorF> planes;
  std::size_t h = 0, w = 0;
  for (const fs::path* p : paths) {
    RgbImage img = read_rgb_image(*p);
    if (planes.empty()) {
      h = img.height;
      w = img.width;
    } else if (img.height != h || img.width != w) {
      throw DataError("resolution mismatch in " + p->string() + ": " +
                      std::to_string(img.width) + "x" + std::to_string(img.height) +
                      ", expected " + std::to_string(w) + "x" + std::to_string(h));
    }
    planes.push_back(normalize_image(img));
  }
  return concat_channels<float>(planes);
}

TensorF load_flow_raster(const fs::path& path) {
  if (path.extension() == ".flo") return read_flo_file(path);
  const PfmImage pfm = read_pfm_file(path);
  if (pfm.data.extent(0) != 3) {
    throw DataError("flow PFM must have 3 channels: " + path.string());
  }
  const std::size_t h = pfm.data.extent(1), w = pfm.data.extent(2);
  return TensorF({2, h, w}, std::vector<float>(pfm.data.raw(), pfm.data.raw() + 2 * h * w));
}

TensorF load_disparity_raster(const fs::path& path, bool negate) {
  const PfmImage pfm = read_pfm_file(path);
  if (pfm.data.extent(0) != 1) {
    throw DataError("disparity PFM must have 1 channel: " + path.string());
  }
  TensorF d = plane_of(pfm.data, 0);
  if (negate) {
    for (auto& v : d.data()) v = -v;
  }
  return d;
}

SceneFlowField load_target(const SampleRecord& rec, const CameraConfig& camera) {
  const TensorF flow = load_flow_raster(rec.flow);
  const std::size_t h = flow.extent(1), w = flow.extent(2);
  const TensorF d0 = load_disparity_raster(rec.disparity_t, camera.negate_disparity);
  require_resolution(d0, h, w, rec.disparity_t);
  TensorF d1;
  if (camera.disparity_source == NextDisparitySource::kDisparityChange) {
    if (rec.disparity_change.empty()) {
      throw DataError("disparity_source = change but no disparity-change raster for " +
                      rec.scene + " frame " + std::to_string(rec.frame));
    }
    // The change raster is a signed difference, so it follows the same sign
    // convention as the disparity files.
    d1 = load_disparity_raster(rec.disparity_change, camera.negate_disparity);
    require_resolution(d1, h, w, rec.disparity_change);
  } else {
    d1 = load_disparity_raster(rec.disparity_t1, camera.negate_disparity);
    require_resolution(d1, h, w, rec.disparity_t1);
  }
  return reconstruct_scene_flow(plane_of(flow, 0), plane_of(flow, 1), d0, d1,
                                camera.intrinsics, camera.disparity_source);
}

Sample load_sample(const SampleRecord& rec, const CameraConfig& camera) {
  Sample s;
  s.input = load_network_input(rec.left_t, rec.right_t, rec.left_t1, rec.right_t1);
  s.target = load_target(rec, camera);
  if (s.target.height() != s.input.extent(1) || s.target.width() != s.input.extent(2)) {
    throw DataError("resolution mismatch in " + rec.flow.string() +
                    ": flow raster does not match the images");
  }
  return s;
}

Sample RecordSource::load(std::size_t index) const {
  return load_sample(records_.at(index), camera_);
}

std::string RecordSource::describe(std::size_t index) const {
  const SampleRecord& r = records_.at(index);
  return r.split + "/" + r.scene + " frame " + std::to_string(r.frame);
}

}  // namespace sceneednet
