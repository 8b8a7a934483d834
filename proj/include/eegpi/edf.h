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

#ifndef EEGPI_EDF_H_
#define EEGPI_EDF_H_

// Reader and writer for plain EDF recordings: a 256-byte fixed ASCII header,
// 256 bytes of header per signal, then data records holding little-endian
// signed 16-bit samples, signal by signal within each record.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace eegpi::edf {

inline constexpr int kFixedHeaderBytes = 256;
inline constexpr int kSignalHeaderBytes = 256;

struct FileHeader {
  std::string version = "0";
  std::string patient_id;
  std::string recording_id;
  std::string start_date = "01.01.00";  // dd.mm.yy
  std::string start_time = "00.00.00";  // hh.mm.ss
  int header_bytes = 0;
  std::string reserved;
  // -1 when the writer of the file did not know the count.
  int num_records = 0;
  double record_duration_s = 1.0;
  int num_signals = 0;

  bool operator==(const FileHeader&) const = default;
};

struct SignalHeader {
  std::string label;
  std::string transducer;
  std::string physical_dimension = "uV";
  double physical_min = -1.0;
  double physical_max = 1.0;
  int digital_min = -32768;
  int digital_max = 32767;
  std::string prefiltering;
  int samples_per_record = 1;
  std::string reserved;

  bool operator==(const SignalHeader&) const = default;
};

// Samples for one signal in file units, with the rate implied by the header.
struct SignalTrace {
  std::vector<double> samples;
  double rate_hz = 0.0;
};

struct EdfFile {
  FileHeader header;
  // Annotation signals ("EDF Annotations") are not part of these vectors.
  std::vector<SignalHeader> signals;
  std::vector<std::vector<std::int16_t>> digital;
  std::vector<std::string> warnings;
};

// Throws eegpi::Error on truncated headers, non-numeric numeric fields,
// header_bytes inconsistent with the signal count, a short data section, or
// signal headers that violate the calibration invariants.
EdfFile Parse(std::span<const std::uint8_t> bytes);

EdfFile ReadFile(const std::string& path);

// `physical` holds one sample vector per signal header; each vector must have
// num_records * samples_per_record entries. header_bytes and num_signals are
// recomputed from `signals`. Physical values outside the calibration range
// are clamped to the digital limits.
std::vector<std::uint8_t> Write(const FileHeader& header,
                                const std::vector<SignalHeader>& signals,
                                const std::vector<std::vector<double>>& physical);

void WriteFile(const std::string& path, std::span<const std::uint8_t> bytes);

// Linear calibration. Endpoints map exactly. Throws kOutOfRange if `code` is
// outside [digital_min, digital_max].
double DigitalToPhysical(int code, const SignalHeader& signal);

// Inverse calibration: rounds half away from zero and clamps.
int PhysicalToDigital(double value, const SignalHeader& signal);

double SampleRate(const FileHeader& header, const SignalHeader& signal);

SignalTrace ToTrace(const EdfFile& file, int signal_index);

// Shortest decimal rendering of `value` that fits an 8-character header
// field. Throws kOutOfRange if no rendering fits.
std::string FormatNumberField(double value);

}  // namespace eegpi::edf

#endif  // EEGPI_EDF_H_
