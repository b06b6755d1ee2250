// Copyright 2026 The sqlret Authors
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

#include "sqlret/error.h"

namespace sqlret {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kSampleTooLarge: return "SampleTooLarge";
    case ErrorCode::kInsufficientPattern: return "InsufficientPattern";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyIndex: return "EmptyIndex";
    case ErrorCode::kNoPositiveAvailable: return "NoPositiveAvailable";
    case ErrorCode::kNoNegativeAvailable: return "NoNegativeAvailable";
    case ErrorCode::kEmptyCandidates: return "EmptyCandidates";
    case ErrorCode::kPatternMismatch: return "PatternMismatch";
    case ErrorCode::kUnalignedValue: return "UnalignedValue";
    case ErrorCode::kEmptyEval: return "EmptyEval";
    case ErrorCode::kDivergedLoss: return "DivergedLoss";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kConfigMismatch: return "ConfigMismatch";
  }
  return "Unknown";
}

}  // namespace sqlret
