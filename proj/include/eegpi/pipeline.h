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

#ifndef EEGPI_PIPELINE_H_
#define EEGPI_PIPELINE_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eegpi/common.h"
#include "eegpi/epoch.h"

namespace eegpi::pipeline {

using ::eegpi::Epoch;

// Incremental epoching of a sample stream into contiguous, non-overlapping
// windows.
class EpochAssembler {
 public:
  EpochAssembler(int length_s, double rate_hz);

  // Returns a completed epoch when this sample fills the current window.
  std::optional<Epoch> Push(double sample);

  std::size_t epoch_samples() const { return epoch_samples_; }
  std::int64_t samples_seen() const { return seen_; }

 private:
  int length_s_;
  double rate_hz_;
  std::size_t epoch_samples_;
  std::vector<double> pending_;
  std::int64_t seen_ = 0;
};

// The trailing partial window is discarded.
std::vector<Epoch> Assemble(std::span<const double> samples, int length_s,
                            double rate_hz);

class EpochSource {
 public:
  virtual ~EpochSource() = default;
  // nullopt at end of stream; throws on failure.
  virtual std::optional<Epoch> Next() = 0;
};

class VectorEpochSource final : public EpochSource {
 public:
  explicit VectorEpochSource(std::vector<Epoch> epochs)
      : epochs_(std::move(epochs)) {}
  std::optional<Epoch> Next() override;

 private:
  std::vector<Epoch> epochs_;
  std::size_t next_ = 0;
};

// Pulls samples from a callback (nullopt = end) and epochs them.
class SampleStreamSource final : public EpochSource {
 public:
  SampleStreamSource(std::function<std::optional<double>()> next_sample,
                     int length_s, double rate_hz)
      : next_sample_(std::move(next_sample)), assembler_(length_s, rate_hz) {}
  std::optional<Epoch> Next() override;

 private:
  std::function<std::optional<double>()> next_sample_;
  EpochAssembler assembler_;
};

using EpochProcessor = std::function<ClassLabel(const Epoch&)>;

struct LogEntry {
  std::int64_t epoch_index = 0;
  std::int64_t start_index = 0;
  ClassLabel label = ClassLabel::kShamWake;
  std::int64_t processing_us = 0;
};

struct TimingReport {
  std::int64_t num_epochs = 0;
  double collection_time_s = 0.0;
  double processing_time_s = 0.0;
  double ratio_percent = 0.0;
  std::uint64_t produced = 0;
  std::uint64_t consumed = 0;
  std::uint64_t dropped = 0;
  bool complete = true;
  std::string error;
};

struct RunOptions {
  std::size_t queue_capacity = 8;
  // Producer releases epoch k after (k + 1) * length_s / acceleration
  // seconds; infinity delivers epochs as fast as the source yields them.
  double acceleration = std::numeric_limits<double>::infinity();
  // Single-threaded stepping driven by `interleaving`, repeated cyclically:
  // 'p' produces one epoch, 'c' consumes one. The queue drains at the end.
  bool deterministic = false;
  std::string interleaving = "pc";
};

struct RunResult {
  std::vector<LogEntry> log;
  TimingReport timing;
};

RunResult RunLive(EpochSource& source, const EpochProcessor& processor,
                  const RunOptions& options = {});

struct BenchRow {
  int epoch_length_s = 0;
  std::int64_t num_epochs = 0;
  double collection_s = 0.0;
  double processing_s = 0.0;
  double ratio_percent = 0.0;
};

// Processes the first n epochs of `pool` (cycling when n exceeds it) for each
// batch size, in input order. Throws on batch sizes < 1 or an empty pool.
std::vector<BenchRow> Bench(std::span<const int> batch_sizes,
                            std::span<const Epoch> pool,
                            const EpochProcessor& processor);

// One JSON object per line; timing omitted when include_timing is false.
void WriteLogJsonl(std::ostream& out, std::span<const LogEntry> log,
                   bool include_timing = true);

// Columns: num_epochs,collection_s,processing_s,ratio_percent
void WriteTimingCsv(std::ostream& out, std::span<const TimingReport> reports);

}  // namespace eegpi::pipeline

#endif  // EEGPI_PIPELINE_H_
