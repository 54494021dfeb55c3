/*
 * Copyright 2026 The tabrank Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace tabrank {

// Every failure raised by the library carries one of these codes. The C API
// forwards them unchanged; the CLI maps them onto exit-code categories.
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kConfig,
  kMissingColumn,
  kDuplicateHeader,
  kUnparsableCell,
  kUnknownColumn,
  kTargetNotBinary,
  kEmptyTable,
  kEmptyCounts,
  kNumericAttribute,
  kMissingCells,
  kTooFewInstances,
  kLengthMismatch,
  kSingleClassLabels,
  kSingleClassTraining,
  kSchemaMismatch,
  kUnknownClass,
  kInvalidSpec,
  kInvalidModel,
  kInternal,
};

enum class ErrorCategory { kConfig, kData, kModel, kInternal };

const char* error_code_name(ErrorCode code) noexcept;
ErrorCategory error_category(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tabrank
