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

#ifndef EEGPI_CROSS_VALIDATION_H_
#define EEGPI_CROSS_VALIDATION_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "eegpi/gbt.h"
#include "eegpi/metrics.h"

namespace eegpi::eval {

struct CvConfig {
  int folds = 10;
  std::uint64_t seed = 0;
};

// Seeded shuffle of [0, n) split into `folds` contiguous blocks whose sizes
// differ by at most one. Throws if n < folds or folds < 2.
std::vector<std::vector<std::size_t>> MakeFolds(std::size_t n,
                                                const CvConfig& config);

using Predictor = std::function<ClassLabel(const features::FeatureVector&)>;
using Trainer =
    std::function<Predictor(std::span<const gbt::LabeledVector> train)>;

struct CvResult {
  std::vector<ConfusionMatrix> fold_confusion;
  std::vector<MetricsReport> fold_metrics;
  // Means over folds; per-class means skip folds where the value is
  // undefined.
  MetricsReport mean;
  ConfusionMatrix pooled;
};

// Folds are trained and evaluated in order.
CvResult KFoldCv(std::span<const gbt::LabeledVector> data,
                 const Trainer& trainer, const CvConfig& config);

}  // namespace eegpi::eval

#endif  // EEGPI_CROSS_VALIDATION_H_
