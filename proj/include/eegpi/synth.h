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

#ifndef EEGPI_SYNTH_H_
#define EEGPI_SYNTH_H_

// Seeded four-class synthetic EEG used in place of recorded data. Each epoch
// is a sum of band-limited random components whose relative powers follow a
// per-class profile (jittered per epoch) plus white noise.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "eegpi/common.h"
#include "eegpi/epoch.h"
#include "json.hpp"

namespace eegpi::synth {

inline constexpr int kGeneratorVersion = 1;

struct Component {
  double low_hz = 0.0;
  double high_hz = 0.0;
  // Share of the class's rhythmic power.
  double weight = 0.0;
};

struct ClassProfile {
  std::vector<Component> components;
  // RMS of the rhythmic part, physical units.
  double amplitude_uv = 50.0;
};

struct SyntheticSpec {
  std::array<ClassProfile, kNumClasses> profiles = DefaultProfiles();
  // RMS of the broadband white noise, physical units.
  double noise_uv = 10.0;
  // Log-normal sigma applied to each component weight per epoch.
  double weight_jitter = 0.3;
  // Log-normal sigma applied to the amplitude per epoch.
  double amplitude_jitter = 0.2;
  int epochs_per_class = 200;
  int epoch_length_s = 16;
  double rate_hz = 256.0;
  std::uint64_t seed = 7;
  // Output layout: epochs are shuffled, then split into files.
  int epochs_per_file = 50;
  double physical_range_uv = 500.0;

  static std::array<ClassProfile, kNumClasses> DefaultProfiles();

  // Throws kInvalidArgument for out-of-range parameters.
  void Validate() const;
  nlohmann::ordered_json ToJson() const;
  // Unknown keys are rejected; missing keys keep their defaults.
  static SyntheticSpec FromJson(const nlohmann::json& j);
};

// Labeled epochs in generation order (class-major).
std::vector<Epoch> GenerateEpochs(const SyntheticSpec& spec);

struct DatasetLayout {
  std::vector<std::string> files;
  // (file, epoch_index, class) rows, in file order.
  struct Row {
    std::string file;
    int epoch_index;
    ClassLabel label;
  };
  std::vector<Row> rows;
};

// Writes synth_NNN.edf files, labels.csv and dataset.json into `dir`
// (created if needed).
DatasetLayout WriteDataset(const SyntheticSpec& spec, const std::string& dir);

}  // namespace eegpi::synth

#endif  // EEGPI_SYNTH_H_
