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
#include <stdexcept>
#include <string>

namespace sceneednet {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorKind {
  kInvalidArgument = 1,
  kShape = 2,
  kParse = 3,
  kIo = 4,
  kData = 5,
  kNumeric = 6,
  kInternal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::kInvalidArgument, what) {}
};

/// Shape mismatch. `axis` names the offending axis ("channels", "height", ...).
class ShapeError : public Error {
 public:
  ShapeError(const std::string& axis, const std::string& what)
      : Error(ErrorKind::kShape, what), axis_(axis) {}
  const std::string& axis() const noexcept { return axis_; }

 private:
  std::string axis_;
};

/// Malformed binary or text input. `offset` is the byte where parsing failed.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error(ErrorKind::kParse,
              what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset),
        detail_(what) {}
  std::size_t offset() const noexcept { return offset_; }

  /// Same error with `prefix` (typically a file name) prepended.
  ParseError with_context(const std::string& prefix) const {
    return ParseError(offset_, prefix + ": " + detail_);
  }

 private:
  std::size_t offset_;
  std::string detail_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::kData, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorKind::kNumeric, what) {}
};

}  // namespace sceneednet
