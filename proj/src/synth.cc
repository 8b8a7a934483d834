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

#include "eegpi/synth.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "eegpi/edf.h"
#include "eegpi/rng.h"

namespace eegpi::synth {
namespace {

constexpr int kSinusoidsPerComponent = 8;

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, "synth: " + message);
}

// Unit-variance sum of random sinusoids inside [low, high], added to `out`
// with the given scale.
void AddComponent(Rng& rng, const Component& c, double scale, double rate_hz,
                  std::vector<double>& out) {
  const double amp = scale * std::sqrt(2.0 / kSinusoidsPerComponent);
  for (int k = 0; k < kSinusoidsPerComponent; ++k) {
    const double f = rng.Uniform(c.low_hz, c.high_hz);
    const double phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    const double w = 2.0 * std::numbers::pi * f / rate_hz;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += amp * std::sin(w * static_cast<double>(i) + phase);
    }
  }
}

Epoch DrawEpoch(Rng& rng, const SyntheticSpec& spec, ClassLabel label,
                std::size_t samples) {
  const ClassProfile& profile = spec.profiles[ClassIndex(label)];
  Epoch e;
  e.length_s = spec.epoch_length_s;
  e.rate_hz = spec.rate_hz;
  e.label = label;
  e.samples.assign(samples, 0.0);

  const double amplitude =
      profile.amplitude_uv * std::exp(spec.amplitude_jitter * rng.Normal());
  std::vector<double> weights;
  double weight_sum = 0.0;
  for (const Component& c : profile.components) {
    weights.push_back(c.weight * std::exp(spec.weight_jitter * rng.Normal()));
    weight_sum += weights.back();
  }
  for (std::size_t k = 0; k < profile.components.size(); ++k) {
    AddComponent(rng, profile.components[k],
                 amplitude * std::sqrt(weights[k] / weight_sum), spec.rate_hz,
                 e.samples);
  }
  for (double& v : e.samples) v += spec.noise_uv * rng.Normal();
  return e;
}

double Number(const nlohmann::json& j, const char* key) {
  if (!j.is_number()) Invalid(std::string(key) + " must be a number");
  return j.get<double>();
}

int Integer(const nlohmann::json& j, const char* key) {
  if (!j.is_number_integer()) Invalid(std::string(key) + " must be an integer");
  return j.get<int>();
}

void RejectUnknown(const nlohmann::json& j, const std::set<std::string>& known,
                   const std::string& where) {
  if (!j.is_object()) Invalid(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) Invalid("unknown key '" + key + "' in " + where);
  }
}

}  // namespace

std::array<ClassProfile, kNumClasses> SyntheticSpec::DefaultProfiles() {
  std::array<ClassProfile, kNumClasses> p;
  // Wake: theta and beta dominant.
  p[ClassIndex(ClassLabel::kShamWake)] = {
      {{0.5, 4.0, 0.15}, {6.5, 8.5, 0.35}, {8.0, 12.0, 0.10},
       {12.0, 30.0, 0.30}, {30.0, 60.0, 0.10}},
      40.0};
  // Sleep: delta dominant.
  p[ClassIndex(ClassLabel::kShamSleep)] = {
      {{2.0, 4.0, 0.60}, {4.0, 8.0, 0.20}, {8.0, 12.0, 0.08},
       {12.0, 30.0, 0.08}, {30.0, 60.0, 0.04}},
      60.0};
  // Injured wake: theta slowed toward the delta border, lower total power.
  p[ClassIndex(ClassLabel::kTbiWake)] = {
      {{0.5, 4.0, 0.20}, {4.0, 5.5, 0.40}, {8.0, 12.0, 0.10},
       {12.0, 30.0, 0.22}, {30.0, 60.0, 0.08}},
      30.0};
  // Injured sleep: slower delta, residual beta.
  p[ClassIndex(ClassLabel::kTbiSleep)] = {
      {{0.5, 1.5, 0.72}, {4.0, 8.0, 0.06}, {8.0, 12.0, 0.04},
       {12.0, 30.0, 0.12}, {30.0, 60.0, 0.06}},
      70.0};
  return p;
}

void SyntheticSpec::Validate() const {
  if (!(rate_hz > 0.0) || rate_hz != std::floor(rate_hz)) {
    Invalid("rate_hz must be a positive integer");
  }
  EpochSampleCount(epoch_length_s, rate_hz);
  if (epochs_per_class < 1) Invalid("epochs_per_class must be >= 1");
  if (epochs_per_file < 1) Invalid("epochs_per_file must be >= 1");
  if (!(noise_uv >= 0.0)) Invalid("noise_uv must be >= 0");
  if (!(weight_jitter >= 0.0) || !(amplitude_jitter >= 0.0)) {
    Invalid("jitter must be >= 0");
  }
  if (!(physical_range_uv > 0.0)) Invalid("physical_range_uv must be > 0");
  for (const ClassProfile& p : profiles) {
    if (p.components.empty()) Invalid("every class needs components");
    if (!(p.amplitude_uv > 0.0)) Invalid("amplitude_uv must be > 0");
    double total = 0.0;
    for (const Component& c : p.components) {
      if (!(c.low_hz >= 0.0 && c.low_hz < c.high_hz &&
            c.high_hz <= rate_hz / 2.0)) {
        Invalid("component band must satisfy 0 <= low < high <= rate/2");
      }
      if (!(c.weight >= 0.0)) Invalid("component weight must be >= 0");
      total += c.weight;
    }
    if (!(total > 0.0)) Invalid("component weights must not all be zero");
  }
}

nlohmann::ordered_json SyntheticSpec::ToJson() const {
  nlohmann::ordered_json j;
  j["generator_version"] = kGeneratorVersion;
  nlohmann::ordered_json classes;
  for (int c = 0; c < kNumClasses; ++c) {
    nlohmann::ordered_json comps = nlohmann::ordered_json::array();
    for (const Component& comp : profiles[c].components) {
      comps.push_back(
          {{"low_hz", comp.low_hz}, {"high_hz", comp.high_hz}, {"weight", comp.weight}});
    }
    classes[std::string(ClassName(ClassFromIndex(c)))] = {
        {"amplitude_uv", profiles[c].amplitude_uv}, {"components", comps}};
  }
  j["profiles"] = classes;
  j["noise_uv"] = noise_uv;
  j["weight_jitter"] = weight_jitter;
  j["amplitude_jitter"] = amplitude_jitter;
  j["epochs_per_class"] = epochs_per_class;
  j["epoch_length_s"] = epoch_length_s;
  j["rate_hz"] = rate_hz;
  j["seed"] = seed;
  j["epochs_per_file"] = epochs_per_file;
  j["physical_range_uv"] = physical_range_uv;
  return j;
}

SyntheticSpec SyntheticSpec::FromJson(const nlohmann::json& j) {
  RejectUnknown(j,
                {"generator_version", "profiles", "noise_uv", "weight_jitter",
                 "amplitude_jitter", "epochs_per_class", "epoch_length_s",
                 "rate_hz", "seed", "epochs_per_file", "physical_range_uv"},
                "synthetic spec");
  SyntheticSpec s;
  if (j.contains("generator_version") &&
      Integer(j["generator_version"], "generator_version") != kGeneratorVersion) {
    throw Error(ErrorCode::kVersionMismatch, "synth: unsupported generator_version");
  }
  if (j.contains("noise_uv")) s.noise_uv = Number(j["noise_uv"], "noise_uv");
  if (j.contains("weight_jitter")) {
    s.weight_jitter = Number(j["weight_jitter"], "weight_jitter");
  }
  if (j.contains("amplitude_jitter")) {
    s.amplitude_jitter = Number(j["amplitude_jitter"], "amplitude_jitter");
  }
  if (j.contains("epochs_per_class")) {
    s.epochs_per_class = Integer(j["epochs_per_class"], "epochs_per_class");
  }
  if (j.contains("epoch_length_s")) {
    s.epoch_length_s = Integer(j["epoch_length_s"], "epoch_length_s");
  }
  if (j.contains("rate_hz")) s.rate_hz = Number(j["rate_hz"], "rate_hz");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) Invalid("seed must be a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("epochs_per_file")) {
    s.epochs_per_file = Integer(j["epochs_per_file"], "epochs_per_file");
  }
  if (j.contains("physical_range_uv")) {
    s.physical_range_uv = Number(j["physical_range_uv"], "physical_range_uv");
  }
  if (j.contains("profiles")) {
    const auto& profiles = j["profiles"];
    RejectUnknown(profiles, {"ShamWake", "ShamSleep", "TbiWake", "TbiSleep"},
                  "profiles");
    for (const auto& [name, pj] : profiles.items()) {
      const int c = ClassIndex(*ParseClassName(name));
      RejectUnknown(pj, {"amplitude_uv", "components"}, "profile " + name);
      if (pj.contains("amplitude_uv")) {
        s.profiles[c].amplitude_uv = Number(pj["amplitude_uv"], "amplitude_uv");
      }
      if (pj.contains("components")) {
        if (!pj["components"].is_array()) Invalid("components must be an array");
        s.profiles[c].components.clear();
        for (const auto& cj : pj["components"]) {
          RejectUnknown(cj, {"low_hz", "high_hz", "weight"}, "component");
          if (!cj.contains("low_hz") || !cj.contains("high_hz") ||
              !cj.contains("weight")) {
            Invalid("component needs low_hz, high_hz and weight");
          }
          s.profiles[c].components.push_back({Number(cj["low_hz"], "low_hz"),
                                              Number(cj["high_hz"], "high_hz"),
                                              Number(cj["weight"], "weight")});
        }
      }
    }
  }
  s.Validate();
  return s;
}

std::vector<Epoch> GenerateEpochs(const SyntheticSpec& spec) {
  spec.Validate();
  const std::size_t samples = EpochSampleCount(spec.epoch_length_s, spec.rate_hz);
  Rng rng(spec.seed);
  std::vector<Epoch> epochs;
  epochs.reserve(static_cast<std::size_t>(spec.epochs_per_class) * kNumClasses);
  std::int64_t start = 0;
  for (ClassLabel c : kAllClasses) {
    for (int i = 0; i < spec.epochs_per_class; ++i) {
      epochs.push_back(DrawEpoch(rng, spec, c, samples));
      epochs.back().start_index = start;
      start += static_cast<std::int64_t>(samples);
    }
  }
  return epochs;
}

DatasetLayout WriteDataset(const SyntheticSpec& spec, const std::string& dir) {
  std::vector<Epoch> epochs = GenerateEpochs(spec);
  // Independent stream for the file order so it does not perturb the signals.
  Rng order_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(epochs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  order_rng.Shuffle(std::span<std::size_t>(order));

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "synth: cannot create " + dir);

  const int rate = static_cast<int>(spec.rate_hz);
  edf::SignalHeader signal;
  signal.label = "EEG";
  signal.transducer = "synthetic";
  signal.physical_dimension = "uV";
  signal.physical_min = -spec.physical_range_uv;
  signal.physical_max = spec.physical_range_uv;
  signal.digital_min = -32768;
  signal.digital_max = 32767;
  signal.prefiltering = "none";
  signal.samples_per_record = rate;

  DatasetLayout layout;
  const std::size_t per_file = static_cast<std::size_t>(spec.epochs_per_file);
  for (std::size_t first = 0, file_no = 0; first < order.size();
       first += per_file, ++file_no) {
    char name[32];
    std::snprintf(name, sizeof(name), "synth_%03zu.edf", file_no);
    const std::size_t last = std::min(order.size(), first + per_file);
    std::vector<double> samples;
    for (std::size_t k = first; k < last; ++k) {
      const Epoch& e = epochs[order[k]];
      samples.insert(samples.end(), e.samples.begin(), e.samples.end());
      layout.rows.push_back(
          {name, static_cast<int>(k - first), *e.label});
    }
    edf::FileHeader header;
    header.patient_id = "synthetic";
    header.recording_id = "eegpi synth v" + std::to_string(kGeneratorVersion) +
                          " seed " + std::to_string(spec.seed);
    header.record_duration_s = 1.0;
    header.num_records = static_cast<int>(samples.size() / rate);
    edf::WriteFile(dir + "/" + name, edf::Write(header, {signal}, {samples}));
    layout.files.push_back(name);
  }

  std::ofstream labels(dir + "/labels.csv", std::ios::trunc);
  labels << "file,epoch_index,class\n";
  for (const auto& row : layout.rows) {
    labels << row.file << ',' << row.epoch_index << ',' << ClassName(row.label)
           << '\n';
  }
  std::ofstream meta(dir + "/dataset.json", std::ios::trunc);
  meta << spec.ToJson().dump(2) << '\n';
  if (!labels || !meta) throw Error(ErrorCode::kIo, "synth: write failed in " + dir);
  return layout;
}

}  // namespace eegpi::synth
