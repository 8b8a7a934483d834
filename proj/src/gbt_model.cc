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

#include "eegpi/gbt.h"

#include <algorithm>
#include <cmath>

namespace eegpi::gbt {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kMaxLoadDepth = 64;

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, "model: " + message);
}

ordered_json NodeToJson(const Tree& tree, std::int32_t index) {
  const Node& n = tree.nodes[index];
  ordered_json j;
  if (n.is_leaf()) {
    j["leaf"] = n.weight;
    return j;
  }
  j["split"] = n.feature;
  j["threshold"] = n.threshold;
  j["default_left"] = n.default_left;
  j["left"] = NodeToJson(tree, n.left);
  j["right"] = NodeToJson(tree, n.right);
  return j;
}

double FiniteNumber(const json& j, const char* what) {
  if (!j.is_number()) Invalid(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) Invalid(std::string(what) + " must be finite");
  return v;
}

// Rebuilds breadth-first node order from the nested representation.
Tree TreeFromJson(const json& root, int num_features) {
  struct Pending {
    const json* node;
    std::int32_t parent;
    bool is_left;
    int depth;
  };
  Tree tree;
  std::vector<Pending> queue = {{&root, -1, false, 0}};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Pending p = queue[head];
    const json& j = *p.node;
    if (!j.is_object()) Invalid("tree node must be an object");
    if (p.depth > kMaxLoadDepth) Invalid("tree too deep");
    const auto index = static_cast<std::int32_t>(tree.nodes.size());
    if (p.parent >= 0) {
      (p.is_left ? tree.nodes[p.parent].left : tree.nodes[p.parent].right) =
          index;
    }
    Node node;
    if (j.contains("leaf")) {
      if (j.size() != 1) Invalid("leaf node has extra fields");
      node.weight = FiniteNumber(j["leaf"], "leaf");
      tree.nodes.push_back(node);
      continue;
    }
    if (!j.contains("split") || !j.contains("threshold") ||
        !j.contains("left") || !j.contains("right") ||
        !j.contains("default_left") || j.size() != 5) {
      Invalid("internal node needs split, threshold, default_left, left, right");
    }
    if (!j["split"].is_number_integer()) Invalid("split must be an integer");
    node.feature = j["split"].get<std::int32_t>();
    if (node.feature < 0 || node.feature >= num_features) {
      Invalid("split feature " + std::to_string(node.feature) +
              " out of range");
    }
    node.threshold = FiniteNumber(j["threshold"], "threshold");
    if (!j["default_left"].is_boolean()) Invalid("default_left must be bool");
    node.default_left = j["default_left"].get<bool>();
    tree.nodes.push_back(node);
    queue.push_back({&j["left"], index, true, p.depth + 1});
    queue.push_back({&j["right"], index, false, p.depth + 1});
  }
  return tree;
}

}  // namespace

double Tree::Predict(std::span<const double> row) const {
  std::int32_t i = 0;
  while (!nodes[i].is_leaf()) {
    const Node& n = nodes[i];
    const double v = row[n.feature];
    if (std::isnan(v)) {
      i = n.default_left ? n.left : n.right;
    } else {
      i = v < n.threshold ? n.left : n.right;
    }
  }
  return nodes[i].weight;
}

int Tree::Depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> depth(nodes.size(), 0);
  int max_depth = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.is_leaf()) continue;
    depth[n.left] = depth[n.right] = depth[i] + 1;
    max_depth = std::max(max_depth, depth[i] + 1);
  }
  return max_depth;
}

Margins Softmax(const Margins& margins) {
  const double top = *std::max_element(margins.begin(), margins.end());
  Margins p{};
  double sum = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    p[c] = std::exp(margins[c] - top);
    sum += p[c];
  }
  for (double& v : p) v /= sum;
  return p;
}

int ArgMax(const Margins& margins) {
  int best = 0;
  for (int c = 1; c < kNumClasses; ++c) {
    if (margins[c] > margins[best]) best = c;
  }
  return best;
}

GbtModel::GbtModel(int num_features, nlohmann::json schema_descriptor,
                   double base_score, double learning_rate)
    : num_features_(num_features),
      schema_(std::move(schema_descriptor)),
      base_score_(base_score),
      learning_rate_(learning_rate) {
  if (!schema_.is_object() || !schema_.contains("schema_id") ||
      !schema_["schema_id"].is_string()) {
    Invalid("schema descriptor needs a string schema_id");
  }
  schema_id_ = schema_["schema_id"].get<std::string>();
}

Margins GbtModel::MarginsUnchecked(std::span<const double> row) const {
  Margins m;
  m.fill(base_score_);
  for (const auto& round : rounds_) {
    for (int c = 0; c < kNumClasses; ++c) {
      m[c] += learning_rate_ * round[c].Predict(row);
    }
  }
  return m;
}

Margins GbtModel::PredictMargins(const features::FeatureVector& fv) const {
  if (fv.schema_id != schema_id_) {
    throw Error(ErrorCode::kSchemaMismatch,
                "feature schema " + fv.schema_id + " does not match model " +
                    schema_id_);
  }
  if (fv.values.size() != static_cast<std::size_t>(num_features_)) {
    Invalid("expected " + std::to_string(num_features_) + " features, got " +
            std::to_string(fv.values.size()));
  }
  for (double v : fv.values) {
    if (!std::isfinite(v)) Invalid("non-finite feature value");
  }
  return MarginsUnchecked(fv.values);
}

Prediction GbtModel::PredictClass(const features::FeatureVector& fv) const {
  const Margins m = PredictMargins(fv);
  Prediction p;
  p.label = ClassFromIndex(ArgMax(m));
  p.probabilities = Softmax(m);
  return p;
}

std::string SaveModel(const GbtModel& model) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  ordered_json classes = ordered_json::array();
  for (ClassLabel c : kAllClasses) classes.push_back(std::string(ClassName(c)));
  j["classes"] = classes;
  j["base_score"] = model.base_score();
  j["learning_rate"] = model.learning_rate();
  j["num_features"] = model.num_features();
  j["num_rounds"] = model.num_rounds();
  j["schema_id"] = model.schema_id();
  j["feature_schema"] = model.schema_descriptor();
  j["train_config"] = model.train_config();
  ordered_json rounds = ordered_json::array();
  for (const auto& round : model.rounds()) {
    ordered_json per_class = ordered_json::array();
    for (const Tree& t : round) per_class.push_back(NodeToJson(t, 0));
    rounds.push_back(std::move(per_class));
  }
  j["trees"] = std::move(rounds);
  return j.dump(1) + "\n";
}

GbtModel LoadModel(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("model: ") + e.what());
  }
  if (!j.is_object()) Invalid("top level must be an object");
  if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
    Invalid("missing format_version");
  }
  if (j["format_version"].get<int>() != kFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "model: unsupported format_version " +
                    j["format_version"].dump());
  }
  for (const char* key : {"classes", "base_score", "learning_rate",
                          "num_features", "num_rounds", "schema_id",
                          "feature_schema", "trees"}) {
    if (!j.contains(key)) Invalid(std::string("missing field ") + key);
  }
  const json& classes = j["classes"];
  if (!classes.is_array() || classes.size() != kNumClasses) {
    Invalid("classes must list the four classes");
  }
  for (int c = 0; c < kNumClasses; ++c) {
    if (!classes[c].is_string() ||
        classes[c].get<std::string>() != ClassName(ClassFromIndex(c))) {
      Invalid("classes must be in canonical order");
    }
  }
  if (!j["num_features"].is_number_integer() ||
      j["num_features"].get<int>() < 1) {
    Invalid("num_features must be a positive integer");
  }
  const int num_features = j["num_features"].get<int>();
  GbtModel model(num_features, j["feature_schema"],
                 FiniteNumber(j["base_score"], "base_score"),
                 FiniteNumber(j["learning_rate"], "learning_rate"));
  if (!j["schema_id"].is_string() ||
      j["schema_id"].get<std::string>() != model.schema_id()) {
    Invalid("schema_id does not match the embedded feature schema");
  }
  if (j.contains("train_config")) model.set_train_config(j["train_config"]);

  const json& trees = j["trees"];
  if (!trees.is_array()) Invalid("trees must be an array");
  if (!j["num_rounds"].is_number_integer() ||
      j["num_rounds"].get<std::size_t>() != trees.size()) {
    Invalid("num_rounds does not match the tree list");
  }
  for (const json& round : trees) {
    if (!round.is_array() || round.size() != kNumClasses) {
      Invalid("each round must hold one tree per class");
    }
    std::array<Tree, kNumClasses> parsed;
    for (int c = 0; c < kNumClasses; ++c) {
      parsed[c] = TreeFromJson(round[c], num_features);
    }
    model.AddRound(std::move(parsed));
  }
  return model;
}

}  // namespace eegpi::gbt
