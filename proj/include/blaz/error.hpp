// Copyright 2026 The Blaz Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BLAZ_ERROR_HPP
#define BLAZ_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace blaz {

enum class ErrorCode {
  kInvalidShape,
  kDimensionMismatch,
  kNonPowerOfTwoBlock,
  kDegenerateShape,
  kLengthMismatch,
  kSettingsMismatch,
  kMaskExcludesMeanCoefficient,
  kZeroNormOperand,
  kNegativeBaseWithFractionalWeight,
  kInvalidParameter,
  kTruncatedStream,
  kInvalidTypeCode,
  kZeroExtent,
  kUnknownOperation,
  kIo,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported with this exception type; `code()` lets
// callers dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace blaz

#endif  // BLAZ_ERROR_HPP
