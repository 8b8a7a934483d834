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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eegpi/gbt.h"

namespace eegpi::gbt {
namespace {

constexpr double kMinGain = 1e-10;
constexpr double kMinHessian = 1e-16;

struct NodeStats {
  double grad = 0.0;
  double hess = 0.0;
};

struct SplitCandidate {
  double gain = kMinGain;
  std::int32_t feature = -1;
  double threshold = 0.0;
};

// Per-node scan state while sweeping one sorted column.
struct ScanState {
  double grad_left = 0.0;
  double hess_left = 0.0;
  double last_value = 0.0;
  bool seen = false;
};

double Score(double g, double h, double lambda) { return g * g / (h + lambda); }

double LogLoss(const std::vector<Margins>& margins,
               std::span<const LabeledVector> data) {
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Margins& m = margins[i];
    const double top = *std::max_element(m.begin(), m.end());
    double sum = 0.0;
    for (double v : m) sum += std::exp(v - top);
    loss += std::log(sum) + top - m[ClassIndex(data[i].label)];
  }
  return loss / static_cast<double>(data.size());
}

}  // namespace

void TrainConfig::Validate() const {
  if (rounds < 0) throw Error(ErrorCode::kInvalidArgument, "rounds must be >= 0");
  if (max_depth < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_depth must be >= 1");
  }
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning_rate must be in (0, 1]");
  }
  if (!(l2_lambda >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "l2_lambda must be >= 0");
  }
  if (!(min_child_weight >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "min_child_weight must be >= 0");
  }
}

std::vector<std::vector<std::uint32_t>> SortColumns(const FeatureMatrix& x) {
  std::vector<std::vector<std::uint32_t>> sorted(x.cols());
  for (std::size_t f = 0; f < x.cols(); ++f) {
    auto& order = sorted[f];
    order.resize(x.rows());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return x.at(a, f) < x.at(b, f);
                     });
  }
  return sorted;
}

Tree GrowTree(const FeatureMatrix& x,
              const std::vector<std::vector<std::uint32_t>>& sorted,
              std::span<const double> grad, std::span<const double> hess,
              const TrainConfig& config) {
  const std::size_t n = x.rows();
  if (grad.size() != n || hess.size() != n || sorted.size() != x.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "gradient shape mismatch");
  }
  const double lambda = config.l2_lambda;

  Tree tree;
  tree.nodes.emplace_back();
  // Node each row currently sits in; -1 once its node is final.
  std::vector<std::int32_t> position(n, 0);
  std::vector<std::int32_t> frontier = {0};

  for (int depth = 0; !frontier.empty(); ++depth) {
    const std::size_t num_nodes = tree.nodes.size();
    std::vector<NodeStats> stats(num_nodes);
    for (std::size_t i = 0; i < n; ++i) {
      if (position[i] < 0) continue;
      stats[position[i]].grad += grad[i];
      stats[position[i]].hess += hess[i];
    }
    for (std::int32_t id : frontier) {
      tree.nodes[id].weight =
          LeafWeight(stats[id].grad, stats[id].hess, lambda);
    }
    if (depth >= config.max_depth) break;

    std::vector<SplitCandidate> best(num_nodes);
    std::vector<ScanState> scan(num_nodes);
    for (std::size_t f = 0; f < x.cols(); ++f) {
      for (std::int32_t id : frontier) scan[id] = {};
      for (std::uint32_t i : sorted[f]) {
        const std::int32_t id = position[i];
        if (id < 0) continue;
        ScanState& s = scan[id];
        const double v = x.at(i, f);
        if (s.seen && v > s.last_value) {
          const NodeStats& total = stats[id];
          const double hess_right = total.hess - s.hess_left;
          if (s.hess_left >= config.min_child_weight &&
              hess_right >= config.min_child_weight) {
            const double gain =
                0.5 * (Score(s.grad_left, s.hess_left, lambda) +
                       Score(total.grad - s.grad_left, hess_right, lambda) -
                       Score(total.grad, total.hess, lambda));
            if (gain > best[id].gain) {
              double threshold = s.last_value + (v - s.last_value) / 2.0;
              if (!(threshold > s.last_value)) threshold = v;
              best[id] = {gain, static_cast<std::int32_t>(f), threshold};
            }
          }
        }
        s.grad_left += grad[i];
        s.hess_left += hess[i];
        s.last_value = v;
        s.seen = true;
      }
    }

    std::vector<std::int32_t> next;
    for (std::int32_t id : frontier) {
      if (best[id].feature < 0) continue;
      const auto left = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      Node& node = tree.nodes[id];
      node.feature = best[id].feature;
      node.threshold = best[id].threshold;
      node.left = left;
      node.right = left + 1;
      node.default_left = true;
      node.weight = 0.0;
      next.push_back(left);
      next.push_back(left + 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::int32_t id = position[i];
      if (id < 0) continue;
      const Node& node = tree.nodes[id];
      if (node.is_leaf()) {
        position[i] = -1;
      } else {
        position[i] = x.at(i, node.feature) < node.threshold ? node.left
                                                             : node.right;
      }
    }
    frontier = std::move(next);
  }
  return tree;
}

TrainResult Train(std::span<const LabeledVector> data, const TrainConfig& config,
                  const nlohmann::json& schema_descriptor) {
  config.Validate();
  if (data.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "train: empty dataset");
  }
  const std::size_t num_features = data.front().features.values.size();
  if (num_features == 0) {
    throw Error(ErrorCode::kInvalidArgument, "train: empty feature vectors");
  }

  GbtModel model(static_cast<int>(num_features), schema_descriptor, 0.0,
                 config.learning_rate);
  model.set_train_config({{"rounds", config.rounds},
                          {"max_depth", config.max_depth},
                          {"learning_rate", config.learning_rate},
                          {"l2_lambda", config.l2_lambda},
                          {"min_child_weight", config.min_child_weight},
                          {"seed", config.seed}});

  std::array<bool, kNumClasses> present{};
  FeatureMatrix x(data.size(), num_features);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& fv = data[i].features;
    if (fv.schema_id != model.schema_id()) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "train: vector " + std::to_string(i) + " has schema " +
                      fv.schema_id + ", expected " + model.schema_id());
    }
    if (fv.values.size() != num_features) {
      throw Error(ErrorCode::kInvalidArgument,
                  "train: inconsistent feature vector lengths");
    }
    for (std::size_t f = 0; f < num_features; ++f) {
      if (!std::isfinite(fv.values[f])) {
        throw Error(ErrorCode::kInvalidArgument,
                    "train: non-finite feature in vector " + std::to_string(i));
      }
      x.at(i, f) = fv.values[f];
    }
    present[ClassIndex(data[i].label)] = true;
  }
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "train: at least two classes are required");
  }

  const auto sorted = SortColumns(x);
  const std::size_t n = data.size();
  std::vector<Margins> margins(n);
  for (auto& m : margins) m.fill(model.base_score());

  TrainResult result;
  result.loss.push_back(LogLoss(margins, data));

  std::vector<std::vector<double>> grad(kNumClasses, std::vector<double>(n));
  std::vector<std::vector<double>> hess(kNumClasses, std::vector<double>(n));
  for (int round = 0; round < config.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const Margins p = Softmax(margins[i]);
      const int y = ClassIndex(data[i].label);
      for (int c = 0; c < kNumClasses; ++c) {
        grad[c][i] = p[c] - (c == y ? 1.0 : 0.0);
        hess[c][i] = std::max(2.0 * p[c] * (1.0 - p[c]), kMinHessian);
      }
    }
    std::array<Tree, kNumClasses> trees;
    for (int c = 0; c < kNumClasses; ++c) {
      trees[c] = GrowTree(x, sorted, grad[c], hess[c], config);
    }
    // Same accumulation order as GbtModel::MarginsUnchecked.
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < kNumClasses; ++c) {
        margins[i][c] += config.learning_rate * trees[c].Predict(x.row(i));
      }
    }
    model.AddRound(std::move(trees));
    result.loss.push_back(LogLoss(margins, data));
  }
  result.model = std::move(model);
  return result;
}

}  // namespace eegpi::gbt
