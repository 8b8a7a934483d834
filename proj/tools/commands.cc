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

#include "commands.h"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "eegpi/common.h"
#include "eegpi/cross_validation.h"
#include "eegpi/dataset.h"
#include "eegpi/edf.h"
#include "eegpi/features.h"
#include "eegpi/gbt.h"
#include "eegpi/loopback.h"
#include "eegpi/metrics.h"
#include "eegpi/pipeline.h"
#include "eegpi/synth.h"
#include "json.hpp"

namespace eegpi::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kReferenceMse = 0.26;

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

// Writes to `path`, or to `fallback` when path is empty.
void Emit(const std::string& path, const std::string& text,
          std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
  } else {
    WriteText(path, text);
  }
}

json ReadConfig(const std::string& path, const std::set<std::string>& known) {
  json j;
  try {
    j = json::parse(ReadText(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, path + ": config must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw Error(ErrorCode::kInvalidArgument,
                  path + ": unknown key '" + key + "'");
    }
  }
  return j;
}

template <typename T>
T ConfigValue(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("config key '") + key + "' has the wrong type");
  }
}

double ParseAcceleration(const std::string& text) {
  if (text == "max" || text == "inf") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && v >= 1.0) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kInvalidArgument,
              "acceleration must be a number >= 1 or 'max'");
}

std::vector<int> ParseIntList(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("bad ") + what + " list: " + text);
    }
  }
  if (out.empty()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("empty ") + what + " list");
  }
  return out;
}

struct LoadedModel {
  gbt::GbtModel model;
  features::FeatureSchema schema;
};

LoadedModel LoadModelFile(const std::string& path) {
  LoadedModel m{gbt::LoadModel(ReadText(path)), {}};
  m.schema = features::FeatureSchema::FromDescriptor(m.model.schema_descriptor());
  return m;
}

pipeline::EpochProcessor MakeProcessor(const LoadedModel& m) {
  return [&m](const Epoch& epoch) {
    return m.model.PredictClass(features::PreprocessAndExtract(epoch, m.schema))
        .label;
  };
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string spec_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int epochs_per_class = 0;
  int epoch_length_s = 0;
  int epochs_per_file = 0;
  double noise_uv = 0.0;
};

int CmdSynth(const SynthArgs& a, const CLI::App& sub, std::ostream& out) {
  synth::SyntheticSpec spec;
  if (!a.spec_path.empty()) {
    json j;
    try {
      j = json::parse(ReadText(a.spec_path));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParse, a.spec_path + ": " + e.what());
    }
    spec = synth::SyntheticSpec::FromJson(j);
  }
  if (sub.count("--seed")) spec.seed = a.seed;
  if (sub.count("--epochs-per-class")) spec.epochs_per_class = a.epochs_per_class;
  if (sub.count("--epoch-length")) spec.epoch_length_s = a.epoch_length_s;
  if (sub.count("--epochs-per-file")) spec.epochs_per_file = a.epochs_per_file;
  if (sub.count("--noise-uv")) spec.noise_uv = a.noise_uv;
  spec.Validate();

  const synth::DatasetLayout layout = synth::WriteDataset(spec, a.out_dir);
  spdlog::info("wrote {} files, {} epochs to {}", layout.files.size(),
               layout.rows.size(), a.out_dir);
  ordered_json summary;
  summary["dir"] = a.out_dir;
  summary["files"] = layout.files;
  summary["epochs"] = layout.rows.size();
  summary["epoch_length_s"] = spec.epoch_length_s;
  summary["seed"] = spec.seed;
  out << summary.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------- train

const std::set<std::string> kTrainKeys = {
    "rounds", "max_depth", "learning_rate", "l2_lambda", "min_child_weight",
    "seed"};

struct TrainArgs {
  std::string data_dir;
  std::string config_path;
  std::string out_path;
  std::string log_path;
  int epoch_length_s = 0;
  int rounds = 0;
  int max_depth = 0;
  double learning_rate = 0.0;
  double l2_lambda = 0.0;
  double min_child_weight = 0.0;
  std::uint64_t seed = 0;
};

// `sub` is null when no hyperparameter flags exist (evaluate).
gbt::TrainConfig ResolveTrainConfig(const std::string& path, const CLI::App* sub,
                                    const TrainArgs& a) {
  gbt::TrainConfig c;
  if (!path.empty()) {
    const json j = ReadConfig(path, kTrainKeys);
    c.rounds = ConfigValue(j, "rounds", c.rounds);
    c.max_depth = ConfigValue(j, "max_depth", c.max_depth);
    c.learning_rate = ConfigValue(j, "learning_rate", c.learning_rate);
    c.l2_lambda = ConfigValue(j, "l2_lambda", c.l2_lambda);
    c.min_child_weight = ConfigValue(j, "min_child_weight", c.min_child_weight);
    c.seed = ConfigValue(j, "seed", c.seed);
  }
  if (sub == nullptr) {
    c.Validate();
    return c;
  }
  if (sub->count("--rounds")) c.rounds = a.rounds;
  if (sub->count("--max-depth")) c.max_depth = a.max_depth;
  if (sub->count("--learning-rate")) c.learning_rate = a.learning_rate;
  if (sub->count("--lambda")) c.l2_lambda = a.l2_lambda;
  if (sub->count("--min-child-weight")) c.min_child_weight = a.min_child_weight;
  if (sub->count("--seed")) c.seed = a.seed;
  c.Validate();
  return c;
}

std::optional<int> LengthOverride(const CLI::App& sub, int value) {
  if (sub.count("--epoch-length")) return value;
  return std::nullopt;
}

int CmdTrain(const TrainArgs& a, const CLI::App& sub, std::ostream& out) {
  const gbt::TrainConfig config = ResolveTrainConfig(a.config_path, &sub, a);
  const auto epochs =
      dataset::LoadEpochs(a.data_dir, LengthOverride(sub, a.epoch_length_s));
  const features::FeatureSchema schema;
  const auto data = dataset::ExtractAll(epochs, schema);
  const gbt::TrainResult result = gbt::Train(data, config, schema.Descriptor());
  WriteText(a.out_path, gbt::SaveModel(result.model));

  std::ostringstream log;
  log << "round,loss\n";
  char buf[64];
  for (std::size_t r = 0; r < result.loss.size(); ++r) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", r, result.loss[r]);
    log << buf;
  }
  const std::string log_path = a.log_path.empty() ? a.out_path + ".trainlog.csv"
                                                  : a.log_path;
  WriteText(log_path, log.str());

  ordered_json summary;
  summary["model"] = a.out_path;
  summary["log"] = log_path;
  summary["epochs"] = data.size();
  summary["rounds"] = config.rounds;
  summary["initial_loss"] = result.loss.front();
  summary["final_loss"] = result.loss.back();
  summary["schema_id"] = schema.id();
  out << summary.dump() << '\n';
  return 0;
}

// ------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string data_dir;
  std::string model_path;
  std::string config_path;
  std::string out_path;
  int folds = 10;
  std::uint64_t seed = 7;
  int epoch_length_s = 0;
};

int CmdEvaluate(const EvaluateArgs& a, const CLI::App& sub, std::ostream& out) {
  const auto epochs =
      dataset::LoadEpochs(a.data_dir, LengthOverride(sub, a.epoch_length_s));
  ordered_json report;
  report["epoch_length_s"] = epochs.front().length_s;
  report["num_epochs"] = epochs.size();

  if (!a.model_path.empty()) {
    const LoadedModel m = LoadModelFile(a.model_path);
    const auto data = dataset::ExtractAll(epochs, m.schema);
    eval::ConfusionMatrix cm;
    for (const auto& lv : data) {
      cm.Add(lv.label, m.model.PredictClass(lv.features).label);
    }
    const eval::MetricsReport metrics = eval::ComputeMetrics(cm);
    report["mode"] = "model";
    report["schema_id"] = m.schema.id();
    report["accuracy"] = metrics.accuracy;
    report["classes"] = eval::ToJson(metrics)["classes"];
    report["confusion"] = eval::ToJson(cm);
  } else {
    const gbt::TrainConfig config =
        ResolveTrainConfig(a.config_path, nullptr, TrainArgs{});
    const features::FeatureSchema schema;
    const auto data = dataset::ExtractAll(epochs, schema);
    const json descriptor = schema.Descriptor();
    eval::Trainer trainer = [&](std::span<const gbt::LabeledVector> train) {
      auto model = std::make_shared<gbt::GbtModel>(
          gbt::Train(train, config, descriptor).model);
      return eval::Predictor([model](const features::FeatureVector& fv) {
        return model->PredictClass(fv).label;
      });
    };
    const eval::CvResult cv =
        eval::KFoldCv(data, trainer, {a.folds, a.seed});
    report["mode"] = "cross_validation";
    report["folds"] = a.folds;
    report["seed"] = a.seed;
    report["schema_id"] = schema.id();
    report["accuracy"] = cv.mean.accuracy;
    report["classes"] = eval::ToJson(cv.mean)["classes"];
    ordered_json folds = ordered_json::array();
    for (std::size_t k = 0; k < cv.fold_metrics.size(); ++k) {
      ordered_json fold = eval::ToJson(cv.fold_metrics[k]);
      fold["confusion"] = eval::ToJson(cv.fold_confusion[k]);
      folds.push_back(std::move(fold));
    }
    report["per_fold"] = std::move(folds);
    report["confusion"] = eval::ToJson(cv.pooled);
  }
  Emit(a.out_path, report.dump(2) + "\n", out);
  return 0;
}

// --------------------------------------------------------------- replay

struct ReplayArgs {
  std::string edf_path;
  std::string out_path;
  int signal = 0;
  int dac_bits = 12;
  int adc_bits = 10;
  double dac_vref = 3.3;
  double adc_vref = 3.3;
  double gain = 0.0;
  double offset = 0.0;
  bool bypass_dac = false;
  bool bypass_adc = false;
  std::string acceleration = "max";
  double band_hz = 60.0;
};

int CmdReplay(const ReplayArgs& a, const CLI::App& sub, std::ostream& out) {
  const edf::EdfFile file = edf::ReadFile(a.edf_path);
  const edf::SignalTrace trace = edf::ToTrace(file, a.signal);

  loopback::LoopbackConfig config;
  if (a.bypass_dac) {
    config.dac.reset();
  } else {
    config.dac = loopback::DacModel{a.dac_bits, a.dac_vref};
  }
  if (a.bypass_adc) {
    config.adc.reset();
  } else {
    config.adc = loopback::AdcModel{a.adc_bits, a.adc_vref};
  }
  config.acceleration = ParseAcceleration(a.acceleration);

  const auto [lo, hi] =
      std::minmax_element(trace.samples.begin(), trace.samples.end());
  double range_min = trace.samples.empty() ? 0.0 : *lo;
  double range_max = trace.samples.empty() ? 0.0 : *hi;
  if (!(range_max > range_min)) {
    range_min = file.signals[a.signal].physical_min;
    range_max = file.signals[a.signal].physical_max;
  }
  const double vref = config.dac ? config.dac->vref_volts
                      : config.adc ? config.adc->vref_volts
                                   : 3.3;
  config.mapping = loopback::CenteredMapping(std::min(range_min, range_max),
                                             std::max(range_min, range_max), vref);
  if (sub.count("--gain")) config.mapping.gain_volts_per_unit = a.gain;
  if (sub.count("--offset")) config.mapping.offset_volts = a.offset;
  config.mapping.Validate();

  const loopback::LoopbackResult r = loopback::ReplayCapture(trace, config);
  const double bound = loopback::CascadeErrorBound(config);

  double mean = 0.0;
  for (double v : trace.samples) mean += v;
  mean /= static_cast<double>(trace.samples.size());
  double variance = 0.0;
  for (double v : trace.samples) variance += (v - mean) * (v - mean);
  variance /= static_cast<double>(trace.samples.size());

  ordered_json report;
  report["edf"] = a.edf_path;
  report["signal"] = a.signal;
  report["physical_dimension"] = file.signals[a.signal].physical_dimension;
  report["rate_hz"] = trace.rate_hz;
  report["nyquist_ok"] = loopback::CheckNyquist(
      loopback::SampleClock{trace.rate_hz, 1.0}, loopback::BandLimit{a.band_hz});
  report["dac_bits"] = config.dac ? json(config.dac->bits) : json(nullptr);
  report["adc_bits"] = config.adc ? json(config.adc->bits) : json(nullptr);
  report["gain_volts_per_unit"] = config.mapping.gain_volts_per_unit;
  report["offset_volts"] = config.mapping.offset_volts;
  report["n"] = r.n;
  report["mse"] = r.mse;
  report["max_abs_error"] = r.max_abs_error;
  report["clip_count"] = r.clip_count;
  report["error_bound"] = bound;
  report["mse_bound"] = bound * bound;
  report["signal_variance"] = variance;
  report["reference_mse"] = kReferenceMse;
  Emit(a.out_path, report.dump(2) + "\n", out);
  return 0;
}

// ------------------------------------------------------------------ run

const std::set<std::string> kRunKeys = {
    "epoch_length_s", "rate_hz",  "queue_capacity", "acceleration",
    "model",          "edf",      "stdin",          "log",
    "timing",         "deterministic", "loopback",  "signal"};

struct RunArgs {
  std::string config_path;
  std::string model_path;
  std::string edf_path;
  bool use_stdin = false;
  int signal = 0;
  int epoch_length_s = 64;
  double rate_hz = 256.0;
  std::size_t capacity = 8;
  std::string acceleration = "max";
  std::string log_path;
  std::string timing_path;
  bool deterministic = false;
  bool direct = false;
};

// Resolved run configuration: file values first, then explicit flags.
struct RunConfig {
  int epoch_length_s = 64;
  double rate_hz = 256.0;
  std::size_t queue_capacity = 8;
  double acceleration = std::numeric_limits<double>::infinity();
  std::string model;
  std::string edf;
  bool use_stdin = false;
  int signal = 0;
  std::string log;
  std::string timing;
  bool deterministic = false;
  bool loopback = true;

  void Validate() const {
    EpochSampleCount(epoch_length_s, rate_hz);
    if (queue_capacity < 1) {
      throw Error(ErrorCode::kInvalidArgument, "queue capacity must be >= 1");
    }
    if (!(acceleration >= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "acceleration must be >= 1");
    }
    if (model.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "run needs a model");
    }
    if (edf.empty() == !use_stdin) {
      throw Error(ErrorCode::kInvalidArgument,
                  "run needs exactly one input: an EDF path or stdin");
    }
  }
};

RunConfig ResolveRunConfig(const RunArgs& a, const CLI::App& sub) {
  RunConfig c;
  if (!a.config_path.empty()) {
    const json j = ReadConfig(a.config_path, kRunKeys);
    c.epoch_length_s = ConfigValue(j, "epoch_length_s", c.epoch_length_s);
    c.rate_hz = ConfigValue(j, "rate_hz", c.rate_hz);
    c.queue_capacity = ConfigValue(j, "queue_capacity", c.queue_capacity);
    if (j.contains("acceleration")) {
      const json& acc = j["acceleration"];
      c.acceleration = acc.is_string() ? ParseAcceleration(acc.get<std::string>())
                                       : ConfigValue(j, "acceleration", 1.0);
    }
    c.model = ConfigValue(j, "model", c.model);
    c.edf = ConfigValue(j, "edf", c.edf);
    c.use_stdin = ConfigValue(j, "stdin", c.use_stdin);
    c.signal = ConfigValue(j, "signal", c.signal);
    c.log = ConfigValue(j, "log", c.log);
    c.timing = ConfigValue(j, "timing", c.timing);
    c.deterministic = ConfigValue(j, "deterministic", c.deterministic);
    c.loopback = ConfigValue(j, "loopback", c.loopback);
  }
  if (sub.count("--epoch-length")) c.epoch_length_s = a.epoch_length_s;
  if (sub.count("--rate")) c.rate_hz = a.rate_hz;
  if (sub.count("--capacity")) c.queue_capacity = a.capacity;
  if (sub.count("--acceleration")) c.acceleration = ParseAcceleration(a.acceleration);
  if (sub.count("--model")) c.model = a.model_path;
  if (sub.count("--edf")) c.edf = a.edf_path;
  if (sub.count("--stdin")) c.use_stdin = a.use_stdin;
  if (sub.count("--signal")) c.signal = a.signal;
  if (sub.count("--log")) c.log = a.log_path;
  if (sub.count("--timing")) c.timing = a.timing_path;
  if (sub.count("--deterministic")) c.deterministic = a.deterministic;
  if (sub.count("--direct")) c.loopback = !a.direct;
  c.Validate();
  return c;
}

int CmdRun(const RunArgs& a, const CLI::App& sub, std::ostream& out,
           std::istream& in) {
  const RunConfig c = ResolveRunConfig(a, sub);
  const LoadedModel m = LoadModelFile(c.model);

  std::vector<double> samples;
  double rate = c.rate_hz;
  std::function<std::optional<double>()> next_sample;
  std::size_t cursor = 0;
  if (!c.edf.empty()) {
    const edf::EdfFile file = edf::ReadFile(c.edf);
    edf::SignalTrace trace = edf::ToTrace(file, c.signal);
    if (sub.count("--rate") && trace.rate_hz != c.rate_hz) {
      throw Error(ErrorCode::kInvalidArgument,
                  "EDF rate does not match --rate");
    }
    rate = trace.rate_hz;
    if (c.loopback) {
      const auto [lo, hi] =
          std::minmax_element(trace.samples.begin(), trace.samples.end());
      loopback::LoopbackConfig lc;
      const auto& sig = file.signals[c.signal];
      const bool flat = trace.samples.empty() || !(*hi > *lo);
      lc.mapping = loopback::CenteredMapping(
          flat ? std::min(sig.physical_min, sig.physical_max) : *lo,
          flat ? std::max(sig.physical_min, sig.physical_max) : *hi,
          lc.dac->vref_volts);
      samples = loopback::ReplayCapture(trace, lc).observed.samples;
    } else {
      samples = std::move(trace.samples);
    }
    next_sample = [&]() -> std::optional<double> {
      if (cursor >= samples.size()) return std::nullopt;
      return samples[cursor++];
    };
  } else {
    next_sample = [&in]() -> std::optional<double> {
      double v = 0.0;
      if (in >> v) return v;
      if (!in.eof()) {
        throw Error(ErrorCode::kParse, "stdin: non-numeric sample");
      }
      return std::nullopt;
    };
  }

  pipeline::SampleStreamSource source(next_sample, c.epoch_length_s, rate);
  pipeline::RunOptions options;
  options.queue_capacity = c.queue_capacity;
  options.acceleration = c.acceleration;
  options.deterministic = c.deterministic;
  const pipeline::RunResult result =
      pipeline::RunLive(source, MakeProcessor(m), options);

  std::ostringstream log;
  pipeline::WriteLogJsonl(log, result.log);
  std::ostringstream timing;
  pipeline::WriteTimingCsv(timing, std::span(&result.timing, 1));
  if (!c.log.empty()) WriteText(c.log, log.str());
  if (!c.timing.empty()) WriteText(c.timing, timing.str());

  const pipeline::TimingReport& t = result.timing;
  ordered_json summary;
  summary["epoch_length_s"] = c.epoch_length_s;
  summary["rate_hz"] = rate;
  summary["produced"] = t.produced;
  summary["consumed"] = t.consumed;
  summary["dropped"] = t.dropped;
  summary["num_epochs"] = t.num_epochs;
  summary["collection_time_s"] = t.collection_time_s;
  summary["processing_time_s"] = t.processing_time_s;
  summary["ratio_percent"] = t.ratio_percent;
  summary["mean_epoch_processing_s"] =
      t.consumed > 0 ? t.processing_time_s / static_cast<double>(t.consumed) : 0.0;
  summary["complete"] = t.complete;
  if (!t.complete) summary["error"] = t.error;
  if (c.log.empty()) out << log.str();
  out << summary.dump() << '\n';
  if (!t.complete) {
    throw Error(ErrorCode::kIo, "source failed: " + t.error);
  }
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string model_path;
  std::string batch_sizes = "1,10,100";
  std::string epoch_lengths = "16,32,64";
  std::uint64_t seed = 7;
  double rate_hz = 256.0;
  int pool = 32;
  std::string out_path;
};

int CmdBench(const BenchArgs& a, std::ostream& out) {
  const LoadedModel m = LoadModelFile(a.model_path);
  const std::vector<int> batches = ParseIntList(a.batch_sizes, "batch size");
  const std::vector<int> lengths = ParseIntList(a.epoch_lengths, "epoch length");
  if (a.pool < 1) throw Error(ErrorCode::kInvalidArgument, "pool must be >= 1");
  const pipeline::EpochProcessor processor = MakeProcessor(m);

  std::ostringstream csv;
  csv << "epoch_length_s,num_epochs,collection_s,processing_s,ratio_percent,"
         "inference_us_per_epoch\n";
  for (int length : lengths) {
    synth::SyntheticSpec spec;
    spec.epoch_length_s = length;
    spec.rate_hz = a.rate_hz;
    spec.seed = a.seed;
    spec.epochs_per_class = std::max(1, (a.pool + kNumClasses - 1) / kNumClasses);
    const std::vector<Epoch> pool = synth::GenerateEpochs(spec);
    std::vector<features::FeatureVector> fvs;
    for (const Epoch& e : pool) {
      fvs.push_back(features::PreprocessAndExtract(e, m.schema));
    }
    const auto rows = pipeline::Bench(batches, pool, processor);
    for (const auto& row : rows) {
      using Clock = std::chrono::steady_clock;
      const auto t0 = Clock::now();
      int sink = 0;
      for (std::int64_t i = 0; i < row.num_epochs; ++i) {
        sink += ClassIndex(
            m.model.PredictClass(fvs[static_cast<std::size_t>(i) % fvs.size()])
                .label);
      }
      const double us =
          std::chrono::duration<double, std::micro>(Clock::now() - t0).count() /
          static_cast<double>(row.num_epochs);
      if (sink < 0) std::abort();
      char buf[200];
      std::snprintf(buf, sizeof(buf), "%d,%lld,%.3f,%.6f,%.6f,%.3f\n",
                    row.epoch_length_s, static_cast<long long>(row.num_epochs),
                    row.collection_s, row.processing_s, row.ratio_percent, us);
      csv << buf;
    }
  }
  Emit(a.out_path, csv.str(), out);
  return 0;
}

void ConfigureLogging() {
  static bool done = false;
  if (done) return;
  done = true;
  auto logger = spdlog::stderr_logger_mt("eegpi");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("EEGPI_LOG_LEVEL");
  spdlog::set_level(level ? spdlog::level::from_str(level)
                          : spdlog::level::warn);
}

std::string OneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  ConfigureLogging();
  CLI::App app{"Single-channel EEG replay, classification and evaluation"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--spec", synth_args.spec_path, "Synthetic spec JSON");
  synth->add_option("--out", synth_args.out_dir, "Output directory")->required();
  synth->add_option("--seed", synth_args.seed);
  synth->add_option("--epochs-per-class", synth_args.epochs_per_class);
  synth->add_option("--epoch-length", synth_args.epoch_length_s);
  synth->add_option("--epochs-per-file", synth_args.epochs_per_file);
  synth->add_option("--noise-uv", synth_args.noise_uv);

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train a model on a dataset");
  train->add_option("--data", train_args.data_dir, "Dataset directory")->required();
  train->add_option("--config", train_args.config_path, "Train config JSON");
  train->add_option("--out", train_args.out_path, "Model output path")->required();
  train->add_option("--log", train_args.log_path, "Training log CSV");
  train->add_option("--epoch-length", train_args.epoch_length_s);
  train->add_option("--rounds", train_args.rounds);
  train->add_option("--max-depth", train_args.max_depth);
  train->add_option("--learning-rate", train_args.learning_rate);
  train->add_option("--lambda", train_args.l2_lambda);
  train->add_option("--min-child-weight", train_args.min_child_weight);
  train->add_option("--seed", train_args.seed);

  EvaluateArgs eval_args;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Cross-validate or score a model");
  evaluate->add_option("--data", eval_args.data_dir, "Dataset directory")
      ->required();
  auto* model_opt =
      evaluate->add_option("--model", eval_args.model_path, "Model to score");
  evaluate->add_option("--config", eval_args.config_path,
                       "Train config JSON for cross-validation")
      ->excludes(model_opt);
  evaluate->add_option("--folds", eval_args.folds);
  evaluate->add_option("--seed", eval_args.seed);
  evaluate->add_option("--epoch-length", eval_args.epoch_length_s);
  evaluate->add_option("--out", eval_args.out_path, "Metrics JSON path");

  ReplayArgs replay_args;
  CLI::App* replay =
      app.add_subcommand("replay", "Replay an EDF signal through the converters");
  replay->add_option("--edf", replay_args.edf_path)->required();
  replay->add_option("--signal", replay_args.signal);
  replay->add_option("--dac-bits", replay_args.dac_bits);
  replay->add_option("--adc-bits", replay_args.adc_bits);
  replay->add_option("--dac-vref", replay_args.dac_vref);
  replay->add_option("--adc-vref", replay_args.adc_vref);
  replay->add_option("--gain", replay_args.gain, "Volts per physical unit");
  replay->add_option("--offset", replay_args.offset, "Volts");
  replay->add_flag("--bypass-dac", replay_args.bypass_dac);
  replay->add_flag("--bypass-adc", replay_args.bypass_adc);
  replay->add_option("--acceleration", replay_args.acceleration);
  replay->add_option("--band-hz", replay_args.band_hz);
  replay->add_option("--out", replay_args.out_path, "Report JSON path");

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Live capture and classification");
  run->add_option("--config", run_args.config_path, "Run config JSON");
  run->add_option("--model", run_args.model_path);
  run->add_option("--edf", run_args.edf_path);
  run->add_flag("--stdin", run_args.use_stdin, "Read samples from stdin");
  run->add_option("--signal", run_args.signal);
  run->add_option("--epoch-length", run_args.epoch_length_s);
  run->add_option("--rate", run_args.rate_hz);
  run->add_option("--capacity", run_args.capacity);
  run->add_option("--acceleration", run_args.acceleration);
  run->add_option("--log", run_args.log_path, "Classification log JSONL");
  run->add_option("--timing", run_args.timing_path, "Timing CSV");
  run->add_flag("--deterministic", run_args.deterministic);
  run->add_flag("--direct", run_args.direct, "Skip the converter models");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Processing-time benchmark");
  bench->add_option("--model", bench_args.model_path)->required();
  bench->add_option("--batch-sizes", bench_args.batch_sizes);
  bench->add_option("--epoch-lengths", bench_args.epoch_lengths);
  bench->add_option("--seed", bench_args.seed);
  bench->add_option("--rate", bench_args.rate_hz);
  bench->add_option("--pool", bench_args.pool, "Distinct epochs per length");
  bench->add_option("--out", bench_args.out_path, "CSV path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: usage: " << OneLine(e.what()) << '\n';
    return 2;
  }

  try {
    if (synth->parsed()) return CmdSynth(synth_args, *synth, out);
    if (train->parsed()) return CmdTrain(train_args, *train, out);
    if (evaluate->parsed()) return CmdEvaluate(eval_args, *evaluate, out);
    if (replay->parsed()) return CmdReplay(replay_args, *replay, out);
    if (run->parsed()) return CmdRun(run_args, *run, out, std::cin);
    if (bench->parsed()) return CmdBench(bench_args, out);
  } catch (const Error& e) {
    err << "error: " << ErrorCodeName(e.code()) << ": " << OneLine(e.what())
        << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << OneLine(e.what()) << '\n';
    return 1;
  }
  return 1;
}

}  // namespace eegpi::cli
