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

#ifndef EEGPI_DATASET_H_
#define EEGPI_DATASET_H_

// On-disk labeled datasets: EDF recordings plus labels.csv with columns
// file,epoch_index,class and an optional dataset.json carrying the epoch
// length.

#include <optional>
#include <string>
#include <vector>

#include "eegpi/epoch.h"
#include "eegpi/features.h"
#include "eegpi/gbt.h"

namespace eegpi::dataset {

struct LabelRow {
  std::string file;
  int epoch_index = 0;
  ClassLabel label = ClassLabel::kShamWake;
};

// Throws kParse on a malformed header, row or class name.
std::vector<LabelRow> ParseLabelCsv(const std::string& text);

// Epochs in labels.csv order. `length_s` overrides dataset.json; one of the
// two must be present. Throws kInvalidArgument for a directory without
// labels or with no rows.
std::vector<Epoch> LoadEpochs(const std::string& dir,
                              std::optional<int> length_s = std::nullopt);

std::vector<gbt::LabeledVector> ExtractAll(const std::vector<Epoch>& epochs,
                                           const features::FeatureSchema& schema);

}  // namespace eegpi::dataset

#endif  // EEGPI_DATASET_H_
