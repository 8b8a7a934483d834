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

#include "eegpi/pipeline.h"

#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include "eegpi/epoch_queue.h"
#include "json.hpp"

namespace eegpi::pipeline {
namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ElapsedNanos(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(to - from).count();
}

struct Processed {
  LogEntry entry;
  std::int64_t nanos = 0;
};

Processed ProcessOne(const Epoch& epoch, std::int64_t index,
                     const EpochProcessor& processor) {
  const auto t0 = Clock::now();
  ClassLabel label = processor(epoch);
  const auto t1 = Clock::now();
  Processed p;
  p.nanos = ElapsedNanos(t0, t1);
  p.entry.epoch_index = index;
  p.entry.start_index = epoch.start_index;
  p.entry.label = label;
  p.entry.processing_us = (p.nanos + 500) / 1000;
  return p;
}

void Finalize(TimingReport& report, const QueueCounters& counters,
              double collection_s, std::int64_t processing_nanos) {
  report.produced = counters.produced;
  report.consumed = counters.consumed;
  report.dropped = counters.dropped;
  report.num_epochs = static_cast<std::int64_t>(counters.produced);
  report.collection_time_s = collection_s;
  report.processing_time_s = static_cast<double>(processing_nanos) * 1e-9;
  report.ratio_percent = collection_s > 0.0
                             ? 100.0 * report.processing_time_s / collection_s
                             : 0.0;
}

}  // namespace

EpochAssembler::EpochAssembler(int length_s, double rate_hz)
    : length_s_(length_s),
      rate_hz_(rate_hz),
      epoch_samples_(EpochSampleCount(length_s, rate_hz)) {
  pending_.reserve(epoch_samples_);
}

std::optional<Epoch> EpochAssembler::Push(double sample) {
  pending_.push_back(sample);
  ++seen_;
  if (pending_.size() < epoch_samples_) return std::nullopt;
  Epoch epoch;
  epoch.samples = std::move(pending_);
  epoch.start_index = seen_ - static_cast<std::int64_t>(epoch_samples_);
  epoch.length_s = length_s_;
  epoch.rate_hz = rate_hz_;
  pending_ = {};
  pending_.reserve(epoch_samples_);
  return epoch;
}

std::vector<Epoch> Assemble(std::span<const double> samples, int length_s,
                            double rate_hz) {
  EpochAssembler assembler(length_s, rate_hz);
  std::vector<Epoch> epochs;
  epochs.reserve(samples.size() / assembler.epoch_samples());
  for (double s : samples) {
    if (auto e = assembler.Push(s)) epochs.push_back(std::move(*e));
  }
  return epochs;
}

std::optional<Epoch> VectorEpochSource::Next() {
  if (next_ >= epochs_.size()) return std::nullopt;
  return epochs_[next_++];
}

std::optional<Epoch> SampleStreamSource::Next() {
  while (auto sample = next_sample_()) {
    if (auto e = assembler_.Push(*sample)) return e;
  }
  return std::nullopt;
}

RunResult RunLive(EpochSource& source, const EpochProcessor& processor,
                  const RunOptions& options) {
  if (!(options.acceleration >= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "acceleration must be >= 1");
  }
  DropNewestQueue<Epoch> queue(options.queue_capacity);
  RunResult result;
  double collection_s = 0.0;
  std::int64_t processing_nanos = 0;
  std::int64_t consumed_index = 0;

  auto consume = [&](const Epoch& epoch) {
    Processed p = ProcessOne(epoch, consumed_index++, processor);
    processing_nanos += p.nanos;
    result.log.push_back(p.entry);
  };

  if (options.deterministic) {
    if (options.interleaving.empty() ||
        options.interleaving.find_first_not_of("pc") != std::string::npos ||
        options.interleaving.find('p') == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "interleaving must be a non-empty string of 'p'/'c' with "
                  "at least one 'p'");
    }
    bool exhausted = false;
    try {
      for (std::size_t step = 0; !exhausted; ++step) {
        const char op = options.interleaving[step % options.interleaving.size()];
        if (op == 'p') {
          auto epoch = source.Next();
          if (!epoch) {
            exhausted = true;
            break;
          }
          collection_s += epoch->length_s;
          queue.TryPush(std::move(*epoch));
        } else if (auto epoch = queue.TryPop()) {
          consume(*epoch);
        }
      }
    } catch (const std::exception& e) {
      result.timing.complete = false;
      result.timing.error = e.what();
    }
    while (auto epoch = queue.TryPop()) consume(*epoch);
    Finalize(result.timing, queue.counters(), collection_s, processing_nanos);
    return result;
  }

  std::string producer_error;
  std::thread producer([&] {
    const auto start = Clock::now();
    double released_s = 0.0;
    try {
      while (auto epoch = source.Next()) {
        released_s += epoch->length_s;
        if (std::isfinite(options.acceleration)) {
          std::this_thread::sleep_until(
              start + std::chrono::duration_cast<Clock::duration>(
                          std::chrono::duration<double>(
                              released_s / options.acceleration)));
        }
        queue.TryPush(std::move(*epoch));
      }
    } catch (const std::exception& e) {
      producer_error = e.what();
    }
    collection_s = released_s;
    queue.Close();
  });
  while (auto epoch = queue.WaitPop()) consume(*epoch);
  producer.join();

  if (!producer_error.empty()) {
    result.timing.complete = false;
    result.timing.error = producer_error;
  }
  Finalize(result.timing, queue.counters(), collection_s, processing_nanos);
  return result;
}

std::vector<BenchRow> Bench(std::span<const int> batch_sizes,
                            std::span<const Epoch> pool,
                            const EpochProcessor& processor) {
  if (pool.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bench: empty epoch pool");
  }
  std::vector<BenchRow> rows;
  for (int n : batch_sizes) {
    if (n < 1) {
      throw Error(ErrorCode::kInvalidArgument, "bench: batch sizes must be >= 1");
    }
    BenchRow row;
    row.epoch_length_s = pool.front().length_s;
    row.num_epochs = n;
    const auto t0 = Clock::now();
    for (int i = 0; i < n; ++i) {
      const Epoch& e = pool[static_cast<std::size_t>(i) % pool.size()];
      row.collection_s += e.length_s;
      processor(e);
    }
    row.processing_s = static_cast<double>(ElapsedNanos(t0, Clock::now())) * 1e-9;
    row.ratio_percent = 100.0 * row.processing_s / row.collection_s;
    rows.push_back(row);
  }
  return rows;
}

void WriteLogJsonl(std::ostream& out, std::span<const LogEntry> log,
                   bool include_timing) {
  for (const LogEntry& e : log) {
    nlohmann::ordered_json j;
    j["epoch_index"] = e.epoch_index;
    j["start_index"] = e.start_index;
    j["label"] = std::string(ClassName(e.label));
    if (include_timing) j["processing_us"] = e.processing_us;
    out << j.dump() << '\n';
  }
}

void WriteTimingCsv(std::ostream& out, std::span<const TimingReport> reports) {
  out << "num_epochs,collection_s,processing_s,ratio_percent\n";
  char buf[160];
  for (const TimingReport& r : reports) {
    std::snprintf(buf, sizeof(buf), "%lld,%.3f,%.6f,%.6f\n",
                  static_cast<long long>(r.num_epochs), r.collection_time_s,
                  r.processing_time_s, r.ratio_percent);
    out << buf;
  }
}

}  // namespace eegpi::pipeline
