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

#ifndef GMVX_COMMON_ERROR_H_
#define GMVX_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace gmvx {

// Failure categories. The CLI maps every category except kInternal and
// kConvergence to the "user/input error" exit code.
enum class ErrorCode {
  kInvalidArgument,
  kSchema,
  kParse,
  kEmptyInput,
  kValidation,
  kDomain,
  kCalibration,
  kConvergence,
  kCapability,
  kPlan,
  kSearch,
  kDegenerate,
  kInsufficientData,
  kIo,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// True for failures caused by the caller's inputs rather than by a bug or a
// numerical breakdown.
bool IsUserError(ErrorCode code);

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace gmvx

#endif  // GMVX_COMMON_ERROR_H_
