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

#include "eegpi/epoch.h"

#include <cmath>
#include <string>

namespace eegpi {

std::size_t EpochSampleCount(int length_s, double rate_hz) {
  bool known = false;
  for (int l : kEpochLengths) known |= (l == length_s);
  if (!known) {
    throw Error(ErrorCode::kInvalidArgument,
                "epoch length must be one of 4, 16, 32, 64 s; got " +
                    std::to_string(length_s));
  }
  const double n = rate_hz * length_s;
  if (!(rate_hz > 0.0) || !std::isfinite(n) || n != std::floor(n)) {
    throw Error(ErrorCode::kInvalidArgument,
                "rate_hz * length_s must be a positive integer");
  }
  return static_cast<std::size_t>(n);
}

}  // namespace eegpi
