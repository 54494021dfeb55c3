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

#include "tabrank/error.hpp"

namespace tabrank {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kDuplicateHeader: return "DuplicateHeader";
    case ErrorCode::kUnparsableCell: return "UnparsableCell";
    case ErrorCode::kUnknownColumn: return "UnknownColumn";
    case ErrorCode::kTargetNotBinary: return "TargetNotBinary";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kEmptyCounts: return "EmptyCounts";
    case ErrorCode::kNumericAttribute: return "NumericAttribute";
    case ErrorCode::kMissingCells: return "MissingCells";
    case ErrorCode::kTooFewInstances: return "TooFewInstances";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kSingleClassLabels: return "SingleClassLabels";
    case ErrorCode::kSingleClassTraining: return "SingleClassTraining";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kUnknownClass: return "UnknownClass";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "UnknownError";
}

ErrorCategory error_category(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kConfig:
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kUnknownClass:
      return ErrorCategory::kConfig;
    case ErrorCode::kIo:
    case ErrorCode::kMissingColumn:
    case ErrorCode::kDuplicateHeader:
    case ErrorCode::kUnparsableCell:
    case ErrorCode::kUnknownColumn:
    case ErrorCode::kTargetNotBinary:
    case ErrorCode::kEmptyTable:
    case ErrorCode::kEmptyCounts:
    case ErrorCode::kNumericAttribute:
    case ErrorCode::kMissingCells:
    case ErrorCode::kTooFewInstances:
    case ErrorCode::kLengthMismatch:
    case ErrorCode::kSingleClassLabels:
    case ErrorCode::kSchemaMismatch:
      return ErrorCategory::kData;
    case ErrorCode::kSingleClassTraining:
    case ErrorCode::kInvalidModel:
      return ErrorCategory::kModel;
    case ErrorCode::kInternal:
      return ErrorCategory::kInternal;
  }
  return ErrorCategory::kInternal;
}

}  // namespace tabrank
