/*
 * Copyright 2026 The gmvx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gmvx/common/error.h"

namespace gmvx {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kSchema:
      return "schema error";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kEmptyInput:
      return "empty input";
    case ErrorCode::kValidation:
      return "validation error";
    case ErrorCode::kDomain:
      return "domain error";
    case ErrorCode::kCalibration:
      return "calibration error";
    case ErrorCode::kConvergence:
      return "convergence error";
    case ErrorCode::kCapability:
      return "capability error";
    case ErrorCode::kPlan:
      return "plan error";
    case ErrorCode::kSearch:
      return "search error";
    case ErrorCode::kDegenerate:
      return "degenerate input";
    case ErrorCode::kInsufficientData:
      return "insufficient data";
    case ErrorCode::kIo:
      return "i/o error";
    case ErrorCode::kInternal:
      return "internal error";
  }
  return "unknown error";
}

bool IsUserError(ErrorCode code) {
  return code != ErrorCode::kInternal && code != ErrorCode::kConvergence;
}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gmvx
