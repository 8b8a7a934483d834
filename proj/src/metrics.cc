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

#include "eegpi/metrics.h"

#include <string>

namespace eegpi::eval {

ConfusionMatrix::ConfusionMatrix(const Counts& counts) : counts_(counts) {
  for (const auto& row : counts_) {
    for (std::int64_t v : row) {
      if (v < 0) {
        throw Error(ErrorCode::kInvalidArgument, "negative confusion count");
      }
    }
  }
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  for (int t = 0; t < kNumClasses; ++t) {
    for (int p = 0; p < kNumClasses; ++p) counts_[t][p] += other.counts_[t][p];
  }
  return *this;
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t sum = 0;
  for (const auto& row : counts_) {
    for (std::int64_t v : row) sum += v;
  }
  return sum;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t sum = 0;
  for (int c = 0; c < kNumClasses; ++c) sum += counts_[c][c];
  return sum;
}

std::int64_t ConfusionMatrix::FalsePositives(int c) const {
  std::int64_t column = 0;
  for (int t = 0; t < kNumClasses; ++t) column += counts_[t][c];
  return column - counts_[c][c];
}

std::int64_t ConfusionMatrix::FalseNegatives(int c) const {
  std::int64_t row = 0;
  for (int p = 0; p < kNumClasses; ++p) row += counts_[c][p];
  return row - counts_[c][c];
}

std::int64_t ConfusionMatrix::TrueNegatives(int c) const {
  return total() - TruePositives(c) - FalsePositives(c) - FalseNegatives(c);
}

ConfusionMatrix Confusion(std::span<const ClassLabel> truth,
                          std::span<const ClassLabel> predicted) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::kInvalidArgument, "confusion: length mismatch");
  }
  if (truth.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "confusion: no samples");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) cm.Add(truth[i], predicted[i]);
  return cm;
}

ConfusionMatrix Confusion(std::span<const int> truth,
                          std::span<const int> predicted) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::kInvalidArgument, "confusion: length mismatch");
  }
  if (truth.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "confusion: no samples");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    cm.Add(ClassFromIndex(truth[i]), ClassFromIndex(predicted[i]));
  }
  return cm;
}

MetricsReport ComputeMetrics(const ConfusionMatrix& cm) {
  const std::int64_t total = cm.total();
  if (total <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "metrics: empty confusion matrix");
  }
  MetricsReport r;
  r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  for (int c = 0; c < kNumClasses; ++c) {
    const std::int64_t tp = cm.TruePositives(c);
    const std::int64_t predicted = tp + cm.FalsePositives(c);
    const std::int64_t actual = tp + cm.FalseNegatives(c);
    if (predicted > 0) r.precision[c] = static_cast<double>(tp) / predicted;
    if (actual > 0) r.recall[c] = static_cast<double>(tp) / actual;
  }
  return r;
}

double OneVsRestAccuracy(const ConfusionMatrix& cm) {
  const std::int64_t total = cm.total();
  if (total <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "metrics: empty confusion matrix");
  }
  double sum = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    sum += static_cast<double>(cm.TruePositives(c) + cm.TrueNegatives(c)) /
           static_cast<double>(total);
  }
  return sum / kNumClasses;
}

nlohmann::ordered_json ToJson(const ConfusionMatrix& cm) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : cm.counts()) rows.push_back(row);
  return rows;
}

nlohmann::ordered_json ToJson(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["accuracy"] = report.accuracy;
  nlohmann::ordered_json classes;
  for (int c = 0; c < kNumClasses; ++c) {
    nlohmann::ordered_json entry;
    entry["precision"] = report.precision[c]
                             ? nlohmann::ordered_json(*report.precision[c])
                             : nlohmann::ordered_json(nullptr);
    entry["recall"] = report.recall[c] ? nlohmann::ordered_json(*report.recall[c])
                                       : nlohmann::ordered_json(nullptr);
    classes[std::string(ClassName(ClassFromIndex(c)))] = entry;
  }
  j["classes"] = classes;
  return j;
}

}  // namespace eegpi::eval
