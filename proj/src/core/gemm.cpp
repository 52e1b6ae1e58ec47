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

#include "core/gemm.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

#include "core/parallel.hpp"

namespace sceneednet {
namespace {

typedef float VecF __attribute__((vector_size(64)));
typedef double VecD __attribute__((vector_size(64)));

template <typename T>
struct VecOf;
template <>
struct VecOf<float> {
  using type = VecF;
};
template <>
struct VecOf<double> {
  using type = VecD;
};

template <typename T>
struct Blocking {
  using Vec = typename VecOf<T>::type;
  static constexpr std::size_t kLanes = 64 / sizeof(T);
  static constexpr std::size_t kMr = 8;
  static constexpr std::size_t kNr = 2 * kLanes;
  static constexpr std::size_t kKc = 256;
  static constexpr std::size_t kMc = 128;
  static constexpr std::size_t kNc = 2048;
};

// Packs rows [0, mc) x depth [0, kc) of `a` into MR-row slivers, k-major.
template <typename T>
void pack_a(std::size_t mc, std::size_t kc, MatrixRef<const T> a, T* out) {
  constexpr std::size_t mr = Blocking<T>::kMr;
  for (std::size_t p = 0; p < mc; p += mr) {
    std::size_t rows = std::min(mr, mc - p);
    for (std::size_t k = 0; k < kc; ++k) {
      const T* src = a.data + static_cast<std::ptrdiff_t>(p) * a.row_stride +
                     static_cast<std::ptrdiff_t>(k) * a.col_stride;
      std::size_t r = 0;
      for (; r < rows; ++r) out[r] = src[static_cast<std::ptrdiff_t>(r) * a.row_stride];
      for (; r < mr; ++r) out[r] = T{0};
      out += mr;
    }
  }
}

// Packs depth [0, kc) x cols [0, nc) of `b` into NR-column slivers, k-major.
template <typename T>
void pack_b(std::size_t kc, std::size_t nc, MatrixRef<const T> b, T* out) {
  constexpr std::size_t nr = Blocking<T>::kNr;
  for (std::size_t p = 0; p < nc; p += nr) {
    std::size_t cols = std::min(nr, nc - p);
    for (std::size_t k = 0; k < kc; ++k) {
      const T* src = b.data + static_cast<std::ptrdiff_t>(k) * b.row_stride +
                     static_cast<std::ptrdiff_t>(p) * b.col_stride;
      std::size_t j = 0;
      if (b.col_stride == 1) {
        std::memcpy(out, src, cols * sizeof(T));
        j = cols;
      } else {
        for (; j < cols; ++j) out[j] = src[static_cast<std::ptrdiff_t>(j) * b.col_stride];
      }
      for (; j < nr; ++j) out[j] = T{0};
      out += nr;
    }
  }
}

// MR x NR tile update: tile = (zero ? 0 : tile) + sum_k a_k * b_k.
template <typename T>
void micro_kernel(std::size_t kc, const T* ap, const T* bp, T* tile, bool zero) {
  using B = Blocking<T>;
  using Vec = typename B::Vec;
  constexpr std::size_t mr = B::kMr, lanes = B::kLanes, nr = B::kNr;
  Vec acc[mr][2];
  if (zero) {
    for (std::size_t r = 0; r < mr; ++r) acc[r][0] = acc[r][1] = Vec{};
  } else {
    for (std::size_t r = 0; r < mr; ++r) {
      std::memcpy(&acc[r][0], tile + r * nr, sizeof(Vec));
      std::memcpy(&acc[r][1], tile + r * nr + lanes, sizeof(Vec));
    }
  }
  for (std::size_t k = 0; k < kc; ++k) {
    Vec b0, b1;
    std::memcpy(&b0, bp, sizeof(Vec));
    std::memcpy(&b1, bp + lanes, sizeof(Vec));
    for (std::size_t r = 0; r < mr; ++r) {
      const T a = ap[r];
      acc[r][0] += a * b0;
      acc[r][1] += a * b1;
    }
    ap += mr;
    bp += nr;
  }
  for (std::size_t r = 0; r < mr; ++r) {
    std::memcpy(tile + r * nr, &acc[r][0], sizeof(Vec));
    std::memcpy(tile + r * nr + lanes, &acc[r][1], sizeof(Vec));
  }
}

// Blocked product over a column range, single thread, private buffers.
template <typename T>
void gemm_serial(std::size_t m, std::size_t n, std::size_t k,
                 MatrixRef<const T> a, MatrixRef<const T> b, MatrixRef<T> c,
                 bool accumulate) {
  using B = Blocking<T>;
  constexpr std::size_t mr = B::kMr, nr = B::kNr;
  std::vector<T> a_pack(((B::kMc + mr - 1) / mr) * mr * B::kKc);
  std::vector<T> b_pack(((B::kNc + nr - 1) / nr) * nr * B::kKc);
  T tile[mr * nr];

  for (std::size_t jc = 0; jc < n; jc += B::kNc) {
    std::size_t nc = std::min(B::kNc, n - jc);
    for (std::size_t pc = 0; pc < k; pc += B::kKc) {
      std::size_t kc = std::min(B::kKc, k - pc);
      const bool zero = !accumulate && pc == 0;
      pack_b<T>(kc, nc,
                {b.data + static_cast<std::ptrdiff_t>(pc) * b.row_stride +
                     static_cast<std::ptrdiff_t>(jc) * b.col_stride,
                 b.row_stride, b.col_stride},
                b_pack.data());
      for (std::size_t ic = 0; ic < m; ic += B::kMc) {
        std::size_t mc = std::min(B::kMc, m - ic);
        pack_a<T>(mc, kc,
                  {a.data + static_cast<std::ptrdiff_t>(ic) * a.row_stride +
                       static_cast<std::ptrdiff_t>(pc) * a.col_stride,
                   a.row_stride, a.col_stride},
                  a_pack.data());
        for (std::size_t jr = 0; jr < nc; jr += nr) {
          std::size_t cols = std::min(nr, nc - jr);
          const T* bp = b_pack.data() + (jr / nr) * nr * kc;
          for (std::size_t ir = 0; ir < mc; ir += mr) {
            std::size_t rows = std::min(mr, mc - ir);
            const T* ap = a_pack.data() + (ir / mr) * mr * kc;
            T* cp = c.data + static_cast<std::ptrdiff_t>(ic + ir) * c.row_stride +
                    static_cast<std::ptrdiff_t>(jc + jr) * c.col_stride;
            if (!zero) {
              for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t j = 0; j < cols; ++j)
                  tile[r * nr + j] = cp[static_cast<std::ptrdiff_t>(r) * c.row_stride +
                                        static_cast<std::ptrdiff_t>(j) * c.col_stride];
            }
            micro_kernel<T>(kc, ap, bp, tile, zero);
            for (std::size_t r = 0; r < rows; ++r)
              for (std::size_t j = 0; j < cols; ++j)
                cp[static_cast<std::ptrdiff_t>(r) * c.row_stride +
                   static_cast<std::ptrdiff_t>(j) * c.col_stride] = tile[r * nr + j];
          }
        }
      }
    }
  }
}

template <typename T>
std::size_t padded_work(std::size_t m, std::size_t n) {
  constexpr std::size_t mr = Blocking<T>::kMr, nr = Blocking<T>::kNr;
  return ((m + mr - 1) / mr) * mr * ((n + nr - 1) / nr) * nr;
}

}  // namespace

template <typename T>
void gemm(std::size_t m, std::size_t n, std::size_t k, MatrixRef<const T> a,
          MatrixRef<const T> b, MatrixRef<T> c, bool accumulate) {
  if (m == 0 || n == 0) return;
  if (k == 0) {
    if (!accumulate) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
          c.data[static_cast<std::ptrdiff_t>(i) * c.row_stride +
                 static_cast<std::ptrdiff_t>(j) * c.col_stride] = T{0};
    }
    return;
  }
  // C^T = B^T A^T has the same per-element summation, so pick whichever
  // orientation wastes less of the register tile.
  if (padded_work<T>(n, m) < padded_work<T>(m, n)) {
    MatrixRef<const T> bt{b.data, b.col_stride, b.row_stride};
    MatrixRef<const T> at{a.data, a.col_stride, a.row_stride};
    a = bt;
    b = at;
    c = {c.data, c.col_stride, c.row_stride};
    std::swap(m, n);
  }
  constexpr std::size_t nr = Blocking<T>::kNr;
  std::size_t panels = (n + nr - 1) / nr;
  // Enough work per thread to amortize packing A again.
  std::size_t min_panels = std::max<std::size_t>(1, (1u << 21) / std::max<std::size_t>(1, m * k * nr));
  parallel_for(
      panels,
      [&](std::size_t p0, std::size_t p1) {
        std::size_t j0 = p0 * nr, j1 = std::min(n, p1 * nr);
        gemm_serial<T>(m, j1 - j0, k, a,
                       {b.data + static_cast<std::ptrdiff_t>(j0) * b.col_stride,
                        b.row_stride, b.col_stride},
                       {c.data + static_cast<std::ptrdiff_t>(j0) * c.col_stride,
                        c.row_stride, c.col_stride},
                       accumulate);
      },
      min_panels);
}

template void gemm<float>(std::size_t, std::size_t, std::size_t,
                          MatrixRef<const float>, MatrixRef<const float>,
                          MatrixRef<float>, bool);
template void gemm<double>(std::size_t, std::size_t, std::size_t,
                           MatrixRef<const double>, MatrixRef<const double>,
                           MatrixRef<double>, bool);

}  // namespace sceneednet
