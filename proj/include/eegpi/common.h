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

#ifndef EEGPI_COMMON_H_
#define EEGPI_COMMON_H_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eegpi {

// Error categories surfaced to the command line as stable tokens.
enum class ErrorCode {
  kInvalidArgument,
  kOutOfRange,
  kTruncated,
  kParse,
  kSchemaMismatch,
  kVersionMismatch,
  kIo,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// The four target classes, in model output order.
enum class ClassLabel : int {
  kShamWake = 0,
  kShamSleep = 1,
  kTbiWake = 2,
  kTbiSleep = 3,
};

inline constexpr int kNumClasses = 4;

inline constexpr std::array<ClassLabel, kNumClasses> kAllClasses = {
    ClassLabel::kShamWake, ClassLabel::kShamSleep, ClassLabel::kTbiWake,
    ClassLabel::kTbiSleep};

inline constexpr int ClassIndex(ClassLabel label) {
  return static_cast<int>(label);
}

// Throws kOutOfRange for indices outside [0, kNumClasses).
ClassLabel ClassFromIndex(int index);

// "ShamWake", "ShamSleep", "TbiWake", "TbiSleep".
std::string_view ClassName(ClassLabel label);

std::optional<ClassLabel> ParseClassName(std::string_view name);

}  // namespace eegpi

#endif  // EEGPI_COMMON_H_
