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

#ifndef EEGPI_EPOCH_H_
#define EEGPI_EPOCH_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "eegpi/common.h"

namespace eegpi {

// Epoch lengths the system works with, in seconds.
inline constexpr std::array<int, 4> kEpochLengths = {4, 16, 32, 64};

struct Epoch {
  std::vector<double> samples;
  std::int64_t start_index = 0;
  int length_s = 0;
  double rate_hz = 0.0;
  std::optional<ClassLabel> label;
};

// Samples per epoch; throws kInvalidArgument unless length_s is one of
// kEpochLengths and rate_hz * length_s is a positive integer.
std::size_t EpochSampleCount(int length_s, double rate_hz);

}  // namespace eegpi

#endif  // EEGPI_EPOCH_H_
