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

#include "eegpi/cross_validation.h"

#include <numeric>
#include <string>

#include "eegpi/rng.h"

namespace eegpi::eval {

std::vector<std::vector<std::size_t>> MakeFolds(std::size_t n,
                                                const CvConfig& config) {
  if (config.folds < 2) {
    throw Error(ErrorCode::kInvalidArgument, "cv: folds must be >= 2");
  }
  const auto folds = static_cast<std::size_t>(config.folds);
  if (n < folds) {
    throw Error(ErrorCode::kInvalidArgument,
                "cv: dataset of " + std::to_string(n) +
                    " items is smaller than " + std::to_string(folds) +
                    " folds");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(config.seed);
  rng.Shuffle(std::span<std::size_t>(order));

  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t pos = 0;
  for (std::size_t k = 0; k < folds; ++k) {
    const std::size_t size = n / folds + (k < n % folds ? 1 : 0);
    out[k].assign(order.begin() + pos, order.begin() + pos + size);
    pos += size;
  }
  return out;
}

CvResult KFoldCv(std::span<const gbt::LabeledVector> data,
                 const Trainer& trainer, const CvConfig& config) {
  const auto folds = MakeFolds(data.size(), config);
  CvResult result;
  std::vector<bool> held_out(data.size());
  for (const auto& fold : folds) {
    std::fill(held_out.begin(), held_out.end(), false);
    for (std::size_t i : fold) held_out[i] = true;
    std::vector<gbt::LabeledVector> train;
    train.reserve(data.size() - fold.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (!held_out[i]) train.push_back(data[i]);
    }
    Predictor predict = trainer(train);
    ConfusionMatrix cm;
    for (std::size_t i : fold) {
      cm.Add(data[i].label, predict(data[i].features));
    }
    result.fold_metrics.push_back(ComputeMetrics(cm));
    result.fold_confusion.push_back(cm);
    result.pooled += cm;
  }

  double accuracy = 0.0;
  for (const auto& m : result.fold_metrics) accuracy += m.accuracy;
  result.mean.accuracy = accuracy / static_cast<double>(folds.size());
  for (int c = 0; c < kNumClasses; ++c) {
    double p_sum = 0.0, r_sum = 0.0;
    int p_n = 0, r_n = 0;
    for (const auto& m : result.fold_metrics) {
      if (m.precision[c]) {
        p_sum += *m.precision[c];
        ++p_n;
      }
      if (m.recall[c]) {
        r_sum += *m.recall[c];
        ++r_n;
      }
    }
    if (p_n > 0) result.mean.precision[c] = p_sum / p_n;
    if (r_n > 0) result.mean.recall[c] = r_sum / r_n;
  }
  return result;
}

}  // namespace eegpi::eval
