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

#ifndef EEGPI_FEATURES_H_
#define EEGPI_FEATURES_H_

// Epoch preprocessing (causal band-pass, per-epoch z-score) and the
// hand-crafted feature set consumed by the tree ensemble.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eegpi/epoch.h"
#include "json.hpp"

namespace eegpi::features {

struct PreprocessConfig {
  double band_low_hz = 0.5;
  double band_high_hz = 60.0;
  int filter_order = 4;
  bool normalize = true;

  // Throws unless 0 < low < high < rate/2 and order >= 1.
  void Validate(double rate_hz) const;
};

struct Preprocessed {
  Epoch epoch;
  // Set when the epoch was constant and z-scoring was not applied.
  bool normalization_skipped = false;
};

// A constant epoch with normalize set is returned unchanged and flagged.
Preprocessed Preprocess(const Epoch& epoch, const PreprocessConfig& config);

struct Band {
  std::string_view name;
  double low_hz;
  double high_hz;
};

inline constexpr std::array<Band, 5> kBands = {{
    {"delta", 0.5, 4.0},
    {"theta", 4.0, 8.0},
    {"alpha", 8.0, 12.0},
    {"beta", 12.0, 30.0},
    {"gamma", 30.0, 60.0},
}};

// Feature positions within FeatureVector::values.
enum Feature : int {
  kAbsDelta = 0, kAbsTheta, kAbsAlpha, kAbsBeta, kAbsGamma,
  kRelDelta, kRelTheta, kRelAlpha, kRelBeta, kRelGamma,
  kThetaDeltaRatio, kAlphaDeltaRatio, kBetaAlphaThetaRatio,
  kVariance, kSkewness, kKurtosis, kZeroCrossingRate,
  kHjorthMobility, kHjorthComplexity, kSpectralEntropy, kSpectralEdge95,
  kNumFeatures,
};

const std::array<std::string_view, kNumFeatures>& FeatureNames();

struct FeatureVector {
  std::vector<double> values;
  std::string schema_id;
};

// Identifies the feature list, its order and every parameter that affects
// the values. Two schemas with equal ids produce identical features.
class FeatureSchema {
 public:
  FeatureSchema() : FeatureSchema(PreprocessConfig{}) {}
  explicit FeatureSchema(PreprocessConfig preprocess);

  const PreprocessConfig& preprocess() const { return preprocess_; }
  double welch_segment_s() const { return welch_segment_s_; }
  double welch_overlap() const { return welch_overlap_; }
  double edge_fraction() const { return edge_fraction_; }

  // Versioned descriptor including "schema_id".
  nlohmann::json Descriptor() const;
  const std::string& id() const { return id_; }

  // Throws kSchemaMismatch if the descriptor's id does not match its content.
  static FeatureSchema FromDescriptor(const nlohmann::json& descriptor);

 private:
  nlohmann::json Content() const;

  PreprocessConfig preprocess_;
  double welch_segment_s_ = 4.0;
  double welch_overlap_ = 0.5;
  double edge_fraction_ = 0.95;
  std::string id_;
};

// Features of an already preprocessed epoch. Throws if the epoch is shorter
// than one Welch segment.
FeatureVector Extract(const Epoch& epoch, const FeatureSchema& schema = {});

// Preprocess followed by Extract.
FeatureVector PreprocessAndExtract(const Epoch& epoch,
                                   const FeatureSchema& schema = {});

}  // namespace eegpi::features

#endif  // EEGPI_FEATURES_H_
