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

#ifndef EEGPI_GBT_H_
#define EEGPI_GBT_H_

// Multiclass gradient-boosted regression trees with a softmax objective:
// one tree per class per round, exact greedy splits, Newton leaf weights.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eegpi/common.h"
#include "eegpi/features.h"
#include "json.hpp"

namespace eegpi::gbt {

inline constexpr int kFormatVersion = 1;

using Margins = std::array<double, kNumClasses>;

struct TrainConfig {
  int rounds = 50;
  int max_depth = 4;
  double learning_rate = 0.3;
  double l2_lambda = 1.0;
  double min_child_weight = 1.0;
  // Recorded for provenance; training uses no sampling, so it does not
  // change the result.
  std::uint64_t seed = 0;

  void Validate() const;
};

struct Node {
  // -1 marks a leaf.
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  // Routing for missing values; training always sets it.
  bool default_left = true;
  double weight = 0.0;

  bool is_leaf() const { return feature < 0; }
};

// Nodes in breadth-first order; nodes[0] is the root. Rows with
// value < threshold go left.
struct Tree {
  std::vector<Node> nodes;

  double Predict(std::span<const double> row) const;
  int Depth() const;
};

inline double LeafWeight(double grad_sum, double hess_sum, double lambda) {
  return -grad_sum / (hess_sum + lambda);
}

// Dense row-major feature matrix.
class FeatureMatrix {
 public:
  FeatureMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

// Row indices of each column in ascending value order (ties by row index).
std::vector<std::vector<std::uint32_t>> SortColumns(const FeatureMatrix& x);

// Grows one regression tree on the given first/second-order gradients.
// Splits maximize 0.5 * (GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)); ties go to
// the lowest feature, then the lowest threshold.
Tree GrowTree(const FeatureMatrix& x,
              const std::vector<std::vector<std::uint32_t>>& sorted,
              std::span<const double> grad, std::span<const double> hess,
              const TrainConfig& config);

struct Prediction {
  ClassLabel label = ClassLabel::kShamWake;
  Margins probabilities{};
};

Margins Softmax(const Margins& margins);
// Lowest index wins ties.
int ArgMax(const Margins& margins);

class GbtModel {
 public:
  GbtModel() = default;
  GbtModel(int num_features, nlohmann::json schema_descriptor,
           double base_score, double learning_rate);

  // Throws kSchemaMismatch or kInvalidArgument (wrong length, non-finite).
  Margins PredictMargins(const features::FeatureVector& fv) const;
  Prediction PredictClass(const features::FeatureVector& fv) const;
  // No schema or finiteness checks.
  Margins MarginsUnchecked(std::span<const double> row) const;

  void AddRound(std::array<Tree, kNumClasses> trees) {
    rounds_.push_back(std::move(trees));
  }

  int num_features() const { return num_features_; }
  int num_rounds() const { return static_cast<int>(rounds_.size()); }
  double base_score() const { return base_score_; }
  double learning_rate() const { return learning_rate_; }
  const std::string& schema_id() const { return schema_id_; }
  const nlohmann::json& schema_descriptor() const { return schema_; }
  const std::vector<std::array<Tree, kNumClasses>>& rounds() const {
    return rounds_;
  }
  std::vector<std::array<Tree, kNumClasses>>& mutable_rounds() {
    return rounds_;
  }
  const nlohmann::json& train_config() const { return train_config_; }
  void set_train_config(nlohmann::json config) {
    train_config_ = std::move(config);
  }

 private:
  int num_features_ = 0;
  nlohmann::json schema_;
  std::string schema_id_;
  double base_score_ = 0.0;
  double learning_rate_ = 0.3;
  nlohmann::json train_config_ = nlohmann::json::object();
  std::vector<std::array<Tree, kNumClasses>> rounds_;
};

struct LabeledVector {
  features::FeatureVector features;
  ClassLabel label;
};

struct TrainResult {
  GbtModel model;
  // Multiclass log-loss on the training set: entry 0 before the first
  // round, entry r after round r.
  std::vector<double> loss;
};

// `schema_descriptor` is embedded in the model and must carry a
// "schema_id" equal to every vector's schema_id. Throws on an empty or
// single-class dataset, mismatched schema or length, or non-finite values.
TrainResult Train(std::span<const LabeledVector> data, const TrainConfig& config,
                  const nlohmann::json& schema_descriptor);

// Versioned JSON; numbers use shortest round-trip formatting.
std::string SaveModel(const GbtModel& model);
// Throws kVersionMismatch for an unknown format_version and kParse or
// kInvalidArgument for structural problems.
GbtModel LoadModel(std::string_view json_text);

}  // namespace eegpi::gbt

#endif  // EEGPI_GBT_H_
