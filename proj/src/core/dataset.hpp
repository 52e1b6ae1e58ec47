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

// Dataset tree layout:
//
//   root/<split>/<scene>/left/*.png|*.ppm
//                        right/*.png|*.ppm
//                        flow/left/into_future/*.pfm|*.flo
//                        disparity/left/*.pfm
//                        disparity_change/left/into_future/*.pfm   (optional)
//
// Files are matched across directories by frame number, the first run of
// digits in the file stem ("0006.png", "OpticalFlowIntoFuture_0006_L.pfm").

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "core/camera.hpp"
#include "core/geometry.hpp"
#include "core/tensor.hpp"

namespace sceneednet {

struct SampleRecord {
  std::filesystem::path left_t, right_t, left_t1, right_t1;
  std::filesystem::path flow;            // forward flow, left camera
  std::filesystem::path disparity_t;
  std::filesystem::path disparity_t1;
  std::filesystem::path disparity_change;  // empty unless provided
  std::string split;
  std::string scene;
  int frame = 0;
};

struct Sample {
  TensorF input;  // [12,H,W]: L_t, R_t, L_t+1, R_t+1, each RGB in [-0.5, 0.5]
  SceneFlowField target;
};

/// One record per consecutive frame pair of each scene, in lexicographic
/// scene order then frame order. Pairs with a missing file are skipped with a
/// warning; an empty result is a DataError.
std::vector<SampleRecord> index_dataset(const std::filesystem::path& root,
                                        const std::string& split);

/// Stacks four images into the 12-channel network input.
TensorF load_network_input(const std::filesystem::path& left_t,
                           const std::filesystem::path& right_t,
                           const std::filesystem::path& left_t1,
                           const std::filesystem::path& right_t1);

/// Reads a forward-flow raster (.flo, or .pfm whose third channel is ignored)
/// as [2,H,W].
TensorF load_flow_raster(const std::filesystem::path& path);

/// Reads a 1-channel disparity PFM as [H,W], negated when `negate` is set.
TensorF load_disparity_raster(const std::filesystem::path& path, bool negate);

/// Ground-truth scene flow of a record.
SceneFlowField load_target(const SampleRecord& rec, const CameraConfig& camera);

Sample load_sample(const SampleRecord& rec, const CameraConfig& camera);

/// Random-access sample provider for training and evaluation.
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual std::size_t size() const = 0;
  virtual Sample load(std::size_t index) const = 0;
  virtual std::string describe(std::size_t index) const = 0;
};

/// Loads records lazily from disk.
class RecordSource final : public SampleSource {
 public:
  RecordSource(std::vector<SampleRecord> records, CameraConfig camera)
      : records_(std::move(records)), camera_(camera) {}
  std::size_t size() const override { return records_.size(); }
  Sample load(std::size_t index) const override;
  std::string describe(std::size_t index) const override;
  const std::vector<SampleRecord>& records() const { return records_; }

 private:
  std::vector<SampleRecord> records_;
  CameraConfig camera_;
};

class InMemorySource final : public SampleSource {
 public:
  explicit InMemorySource(std::vector<Sample> samples) : samples_(std::move(samples)) {}
  std::size_t size() const override { return samples_.size(); }
  Sample load(std::size_t index) const override { return samples_.at(index); }
  std::string describe(std::size_t index) const override {
    return "sample " + std::to_string(index);
  }

 private:
  std::vector<Sample> samples_;
};

}  // namespace sceneednet
