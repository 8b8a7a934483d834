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

#ifndef EEGPI_LOOPBACK_H_
#define EEGPI_LOOPBACK_H_

// Software stand-ins for the replay DAC and capture ADC. A stored trace is
// mapped into the converter voltage window, emitted by the DAC model, read
// back by the ADC model and mapped back to physical units for comparison.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "eegpi/edf.h"

namespace eegpi::loopback {

struct DacModel {
  int bits = 12;
  double vref_volts = 3.3;

  void Validate() const;
  std::int32_t max_code() const { return (std::int32_t{1} << bits) - 1; }
  // Voltage step between adjacent codes.
  double lsb_volts() const { return vref_volts / max_code(); }
};

struct AdcModel {
  int bits = 10;
  double vref_volts = 3.3;

  void Validate() const;
  std::int32_t max_code() const { return (std::int32_t{1} << bits) - 1; }
  double lsb_volts() const { return vref_volts / (std::int32_t{1} << bits); }
};

// volts = gain * physical + offset.
struct VoltageMapping {
  double gain_volts_per_unit = 1.0;
  double offset_volts = 0.0;

  void Validate() const;
  double ToVolts(double physical) const {
    return gain_volts_per_unit * physical + offset_volts;
  }
  double ToPhysical(double volts) const {
    return (volts - offset_volts) / gain_volts_per_unit;
  }
};

// Maps the midpoint of [physical_min, physical_max] to vref/2 and the span to
// 90% of the window.
VoltageMapping CenteredMapping(double physical_min, double physical_max,
                               double vref_volts);

struct SampleClock {
  double rate_hz = 256.0;
  // 1 = real time; infinity = as fast as possible.
  double acceleration = 1.0;

  void Validate() const;
  bool paced() const { return std::isfinite(acceleration); }
  static SampleClock Unpaced(double rate_hz) {
    return {rate_hz, std::numeric_limits<double>::infinity()};
  }
};

struct BandLimit {
  double max_hz = 60.0;
};

// f_s >= 2 f_c.
bool CheckNyquist(const SampleClock& clock, const BandLimit& band);

struct DacOutput {
  std::int32_t code = 0;
  double volts = 0.0;
};

DacOutput DacEmit(double physical, const VoltageMapping& map,
                  const DacModel& dac);
std::int32_t AdcSample(double volts, const AdcModel& adc);
// Lower edge of the code's input interval.
double AdcCodeToVolts(std::int32_t code, const AdcModel& adc);

// Mean squared difference. Throws on empty input or length mismatch.
double MeanSquaredError(std::span<const double> expected,
                        std::span<const double> observed);

// Device seam between the converter models and whatever carries the voltage.
// Timestamps are seconds of stream time.
class VoltageSink {
 public:
  virtual ~VoltageSink() = default;
  virtual void Emit(double volts, double timestamp_s) = 0;
};

class VoltageSource {
 public:
  virtual ~VoltageSource() = default;
  virtual double Read(double timestamp_s) = 0;
};

// An ideal wire: Read returns the most recently emitted voltage.
class LoopbackWire final : public VoltageSink, public VoltageSource {
 public:
  void Emit(double volts, double) override { volts_ = volts; }
  double Read(double) override { return volts_; }

 private:
  double volts_ = 0.0;
};

struct LoopbackConfig {
  VoltageMapping mapping;
  // nullopt bypasses the converter.
  std::optional<DacModel> dac = DacModel{};
  std::optional<AdcModel> adc = AdcModel{};
  // Replay speed relative to the trace's own rate; infinity disables pacing.
  double acceleration = std::numeric_limits<double>::infinity();
};

struct LoopbackResult {
  edf::SignalTrace expected;
  edf::SignalTrace observed;
  std::size_t n = 0;
  double mse = 0.0;
  double max_abs_error = 0.0;
  // Samples whose mapped voltage fell outside a converter's window.
  std::size_t clip_count = 0;
};

// Throws kInvalidArgument on an empty trace or invalid models.
LoopbackResult ReplayCapture(const edf::SignalTrace& trace,
                             const LoopbackConfig& config);

// Same, but drives an external seam instead of the built-in wire.
LoopbackResult ReplayCapture(const edf::SignalTrace& trace,
                             const LoopbackConfig& config, VoltageSink& sink,
                             VoltageSource& source);

// Worst-case per-sample error of unclipped samples in physical units:
// (half a DAC step + one ADC step) / |gain|. Zero with both converters
// bypassed.
double CascadeErrorBound(const LoopbackConfig& config);

}  // namespace eegpi::loopback

#endif  // EEGPI_LOOPBACK_H_
