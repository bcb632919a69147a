// Copyright 2026 The dynsparse Authors
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
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dynsparse {

using index_t = std::ptrdiff_t;
using value_t = double;

// Index mapping is part of the public ABI (see dynsparse.h).
enum class FormatId : int { Coo = 0, Csr = 1, Dia = 2 };

inline constexpr int kNumFormats = 3;
inline constexpr FormatId kAllFormats[kNumFormats] = {FormatId::Coo, FormatId::Csr,
                                                      FormatId::Dia};

enum class MemorySpace : int { Host = 0 };

enum class ErrorCode : int {
  IndexOutOfRange = 1,
  LengthMismatch,
  NonMonotoneOffsets,
  UnsortedRow,
  DuplicateOffset,
  UnsortedOffsets,
  ShapeMismatch,
  NonzeroPadding,
  UnknownFormat,
  TypeMismatch,
  IncompatibleContainers,
  DiaFillOverflow,
  ParseError,
  IoError,
  DimensionMismatch,
  StructurallyAbsentDiagonal,
  BreakdownZeroCurvature,
  ValidationFailed,
  EmptySearchSpace,
  InvalidArgument,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Every failure in the library is reported through this exception type.
/// `detail()` carries the offending index where one exists (the line number
/// for ParseError, the row for StructurallyAbsentDiagonal).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<index_t> detail = std::nullopt)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code),
        message_(what),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  /// what() without the code prefix.
  const std::string& message() const noexcept { return message_; }
  std::optional<index_t> detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<index_t> detail_;
};

FormatId format_from_index(int index);
std::string_view format_name(FormatId f) noexcept;
FormatId parse_format(std::string_view name);

}  // namespace dynsparse
