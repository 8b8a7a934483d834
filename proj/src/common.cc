// Copyright 2026 The eegpi Authors.
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

#include "eegpi/common.h"

namespace eegpi {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kOutOfRange:
      return "out_of_range";
    case ErrorCode::kTruncated:
      return "truncated";
    case ErrorCode::kParse:
      return "parse_error";
    case ErrorCode::kSchemaMismatch:
      return "schema_mismatch";
    case ErrorCode::kVersionMismatch:
      return "version_mismatch";
    case ErrorCode::kIo:
      return "io_error";
    case ErrorCode::kInternal:
      return "internal";
  }
  return "internal";
}

ClassLabel ClassFromIndex(int index) {
  if (index < 0 || index >= kNumClasses) {
    throw Error(ErrorCode::kOutOfRange,
                "class index " + std::to_string(index) + " out of range");
  }
  return static_cast<ClassLabel>(index);
}

std::string_view ClassName(ClassLabel label) {
  switch (label) {
    case ClassLabel::kShamWake:
      return "ShamWake";
    case ClassLabel::kShamSleep:
      return "ShamSleep";
    case ClassLabel::kTbiWake:
      return "TbiWake";
    case ClassLabel::kTbiSleep:
      return "TbiSleep";
  }
  return "?";
}

std::optional<ClassLabel> ParseClassName(std::string_view name) {
  for (ClassLabel c : kAllClasses) {
    if (ClassName(c) == name) return c;
  }
  return std::nullopt;
}

}  // namespace eegpi
