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

#include "blaz/error.hpp"

namespace blaz {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidShape: return "InvalidShape";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonPowerOfTwoBlock: return "NonPowerOfTwoBlock";
    case ErrorCode::kDegenerateShape: return "DegenerateShape";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kSettingsMismatch: return "SettingsMismatch";
    case ErrorCode::kMaskExcludesMeanCoefficient: return "MaskExcludesMeanCoefficient";
    case ErrorCode::kZeroNormOperand: return "ZeroNormOperand";
    case ErrorCode::kNegativeBaseWithFractionalWeight: return "NegativeBaseWithFractionalWeight";
    case ErrorCode::kInvalidParameter: return "InvalidParameter";
    case ErrorCode::kTruncatedStream: return "TruncatedStream";
    case ErrorCode::kInvalidTypeCode: return "InvalidTypeCode";
    case ErrorCode::kZeroExtent: return "ZeroExtent";
    case ErrorCode::kUnknownOperation: return "UnknownOperation";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace blaz
