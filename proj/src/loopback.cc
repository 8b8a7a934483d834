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

#include "eegpi/loopback.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <thread>

#include "eegpi/common.h"

namespace eegpi::loopback {
namespace {

void CheckBits(int bits, double vref, const char* what) {
  if (bits < 1 || bits > 16) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " bits must be in [1, 16], got " +
                    std::to_string(bits));
  }
  if (!(vref > 0.0) || !std::isfinite(vref)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " vref must be positive");
  }
}

}  // namespace

void DacModel::Validate() const { CheckBits(bits, vref_volts, "dac"); }
void AdcModel::Validate() const { CheckBits(bits, vref_volts, "adc"); }

void VoltageMapping::Validate() const {
  if (gain_volts_per_unit == 0.0 || !std::isfinite(gain_volts_per_unit) ||
      !std::isfinite(offset_volts)) {
    throw Error(ErrorCode::kInvalidArgument,
                "voltage mapping needs a finite non-zero gain");
  }
}

void SampleClock::Validate() const {
  if (!(rate_hz > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  if (!(acceleration >= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "acceleration must be >= 1");
  }
}

VoltageMapping CenteredMapping(double physical_min, double physical_max,
                               double vref_volts) {
  const double span = physical_max - physical_min;
  if (!(span > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "mapping needs physical_max > physical_min");
  }
  VoltageMapping map;
  map.gain_volts_per_unit = 0.9 * vref_volts / span;
  map.offset_volts =
      vref_volts / 2.0 - map.gain_volts_per_unit * (physical_min + span / 2.0);
  return map;
}

bool CheckNyquist(const SampleClock& clock, const BandLimit& band) {
  return clock.rate_hz >= 2.0 * band.max_hz;
}

DacOutput DacEmit(double physical, const VoltageMapping& map,
                  const DacModel& dac) {
  const double full_scale = dac.max_code();
  const double ideal = std::round(map.ToVolts(physical) / dac.vref_volts *
                                  full_scale);
  DacOutput out;
  out.code = static_cast<std::int32_t>(std::clamp(ideal, 0.0, full_scale));
  out.volts = out.code / full_scale * dac.vref_volts;
  return out;
}

std::int32_t AdcSample(double volts, const AdcModel& adc) {
  const double levels = static_cast<double>(std::int32_t{1} << adc.bits);
  const double code = std::floor(levels * volts / adc.vref_volts);
  return static_cast<std::int32_t>(
      std::clamp(code, 0.0, static_cast<double>(adc.max_code())));
}

double AdcCodeToVolts(std::int32_t code, const AdcModel& adc) {
  return code * adc.lsb_volts();
}

double MeanSquaredError(std::span<const double> expected,
                        std::span<const double> observed) {
  if (expected.size() != observed.size()) {
    throw Error(ErrorCode::kInvalidArgument, "mse: length mismatch");
  }
  if (expected.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mse: empty input");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    sum += d * d;
  }
  return sum / static_cast<double>(expected.size());
}

LoopbackResult ReplayCapture(const edf::SignalTrace& trace,
                             const LoopbackConfig& config) {
  LoopbackWire wire;
  return ReplayCapture(trace, config, wire, wire);
}

LoopbackResult ReplayCapture(const edf::SignalTrace& trace,
                             const LoopbackConfig& config, VoltageSink& sink,
                             VoltageSource& source) {
  if (trace.samples.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "replay: empty trace");
  }
  if (!(trace.rate_hz > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "replay: rate must be positive");
  }
  if (!(config.acceleration >= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "acceleration must be >= 1");
  }
  if (config.dac) config.dac->Validate();
  if (config.adc) config.adc->Validate();

  LoopbackResult result;
  result.expected = trace;
  result.n = trace.samples.size();
  result.observed.rate_hz = trace.rate_hz;
  result.observed.samples.reserve(result.n);

  const bool ideal_path = !config.dac && !config.adc;
  if (!ideal_path) config.mapping.Validate();

  const auto start = std::chrono::steady_clock::now();
  const bool paced = std::isfinite(config.acceleration);
  for (std::size_t i = 0; i < result.n; ++i) {
    const double x = trace.samples[i];
    const double t = static_cast<double>(i) / trace.rate_hz;
    if (paced) {
      std::this_thread::sleep_until(
          start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(t / config.acceleration)));
    }
    if (ideal_path) {
      result.observed.samples.push_back(x);
      continue;
    }

    const double mapped = config.mapping.ToVolts(x);
    bool clipped = false;
    double emitted = mapped;
    if (config.dac) {
      clipped |= mapped < 0.0 || mapped > config.dac->vref_volts;
      emitted = DacEmit(x, config.mapping, *config.dac).volts;
    }
    sink.Emit(emitted, t);
    double captured = source.Read(t);
    if (config.adc) {
      clipped |= captured < 0.0 || captured > config.adc->vref_volts;
      captured = AdcCodeToVolts(AdcSample(captured, *config.adc), *config.adc);
    }
    if (clipped) ++result.clip_count;
    result.observed.samples.push_back(config.mapping.ToPhysical(captured));
  }

  result.mse = MeanSquaredError(result.expected.samples, result.observed.samples);
  for (std::size_t i = 0; i < result.n; ++i) {
    result.max_abs_error =
        std::max(result.max_abs_error,
                 std::abs(result.observed.samples[i] - result.expected.samples[i]));
  }
  return result;
}

double CascadeErrorBound(const LoopbackConfig& config) {
  double volts = 0.0;
  if (config.dac) volts += config.dac->lsb_volts() / 2.0;
  if (config.adc) volts += config.adc->lsb_volts();
  if (volts == 0.0) return 0.0;
  return volts / std::abs(config.mapping.gain_volts_per_unit);
}

}  // namespace eegpi::loopback
