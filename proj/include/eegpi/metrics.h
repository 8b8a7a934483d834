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

#ifndef EEGPI_METRICS_H_
#define EEGPI_METRICS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "eegpi/common.h"
#include "json.hpp"

namespace eegpi::eval {

// Rows are the true class, columns the predicted class.
class ConfusionMatrix {
 public:
  using Counts = std::array<std::array<std::int64_t, kNumClasses>, kNumClasses>;

  ConfusionMatrix() = default;
  explicit ConfusionMatrix(const Counts& counts);

  void Add(ClassLabel truth, ClassLabel predicted) {
    ++counts_[ClassIndex(truth)][ClassIndex(predicted)];
  }
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  std::int64_t at(int truth, int predicted) const {
    return counts_[truth][predicted];
  }
  const Counts& counts() const { return counts_; }
  std::int64_t total() const;
  std::int64_t trace() const;

  // One-vs-rest expansion for class c.
  std::int64_t TruePositives(int c) const { return counts_[c][c]; }
  std::int64_t FalsePositives(int c) const;
  std::int64_t FalseNegatives(int c) const;
  std::int64_t TrueNegatives(int c) const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  Counts counts_{};
};

// Throws on length mismatch or empty input.
ConfusionMatrix Confusion(std::span<const ClassLabel> truth,
                          std::span<const ClassLabel> predicted);
// Integer labels; throws kOutOfRange for an index outside the class set.
ConfusionMatrix Confusion(std::span<const int> truth,
                          std::span<const int> predicted);

struct MetricsReport {
  // trace / total.
  double accuracy = 0.0;
  // nullopt when the class was never predicted (precision) or never occurs
  // (recall).
  std::array<std::optional<double>, kNumClasses> precision;
  std::array<std::optional<double>, kNumClasses> recall;
};

// Throws if the matrix is empty.
MetricsReport ComputeMetrics(const ConfusionMatrix& cm);

// Mean over classes of (TP_c + TN_c) / total. Equals (trace + total) /
// (2 * total) for a single-label multiclass matrix.
double OneVsRestAccuracy(const ConfusionMatrix& cm);

nlohmann::ordered_json ToJson(const ConfusionMatrix& cm);
// Per class {precision, recall} keyed by class name; undefined values are
// null.
nlohmann::ordered_json ToJson(const MetricsReport& report);

}  // namespace eegpi::eval

#endif  // EEGPI_METRICS_H_
