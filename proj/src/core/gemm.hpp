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

#pragma once

#include <cstddef>

namespace sceneednet {

/// Strided matrix view: element (r, c) lives at data[r * row_stride + c * col_stride].
template <typename T>
struct MatrixRef {
  T* data;
  std::ptrdiff_t row_stride;
  std::ptrdiff_t col_stride;
};

/// C = (accumulate ? C : 0) + A * B with A: MxK, B: KxN, C: MxN.
///
/// Each C element is a single running sum taken over k = 0..K-1 in increasing
/// order, so results are bit-identical regardless of blocking, orientation or
/// thread count.
template <typename T>
void gemm(std::size_t m, std::size_t n, std::size_t k, MatrixRef<const T> a,
          MatrixRef<const T> b, MatrixRef<T> c, bool accumulate);

}  // namespace sceneednet
