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

#include "eegpi/edf.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <string_view>

#include "eegpi/common.h"

namespace eegpi::edf {
namespace {

constexpr std::string_view kAnnotationLabel = "EDF Annotations";

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\0')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

[[noreturn]] void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, "edf: " + message);
}

// Sequential reader over the fixed-width ASCII header.
class FieldReader {
 public:
  FieldReader(std::span<const std::uint8_t> bytes, std::size_t offset)
      : bytes_(bytes), pos_(offset) {}

  std::string Text(std::size_t width, std::string_view name) {
    if (pos_ + width > bytes_.size()) {
      Fail(ErrorCode::kTruncated, "header truncated while reading " +
                                      std::string(name));
    }
    std::string_view raw(reinterpret_cast<const char*>(bytes_.data() + pos_),
                         width);
    pos_ += width;
    return std::string(Trim(raw));
  }

  double Decimal(std::size_t width, std::string_view name) {
    std::string field = Text(width, name);
    std::string_view s = field;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
        !std::isfinite(value)) {
      Fail(ErrorCode::kParse, "non-numeric field " + std::string(name) +
                                  ": '" + field + "'");
    }
    return value;
  }

  int Integer(std::size_t width, std::string_view name) {
    std::string field = Text(width, name);
    std::string_view s = field;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
        value < std::numeric_limits<int>::min() ||
        value > std::numeric_limits<int>::max()) {
      Fail(ErrorCode::kParse, "non-numeric field " + std::string(name) +
                                  ": '" + field + "'");
    }
    return static_cast<int>(value);
  }

  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

void ValidateSignal(const SignalHeader& s, int index) {
  const std::string where = "signal " + std::to_string(index) + ": ";
  if (s.digital_min >= s.digital_max) {
    Fail(ErrorCode::kInvalidArgument, where + "digital_min >= digital_max");
  }
  if (s.digital_min < std::numeric_limits<std::int16_t>::min() ||
      s.digital_max > std::numeric_limits<std::int16_t>::max()) {
    Fail(ErrorCode::kInvalidArgument, where + "digital range exceeds 16 bits");
  }
  if (!(s.physical_min != s.physical_max) || !std::isfinite(s.physical_min) ||
      !std::isfinite(s.physical_max)) {
    Fail(ErrorCode::kInvalidArgument, where + "degenerate physical range");
  }
  if (s.samples_per_record < 1) {
    Fail(ErrorCode::kInvalidArgument, where + "samples_per_record < 1");
  }
}

void PutText(std::vector<std::uint8_t>& out, std::string_view value,
             std::size_t width, std::string_view name) {
  if (value.size() > width) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(name) + " longer than " + std::to_string(width) +
             " characters");
  }
  for (char c : value) {
    if (static_cast<unsigned char>(c) < 32 || static_cast<unsigned char>(c) > 126) {
      Fail(ErrorCode::kInvalidArgument,
           std::string(name) + " contains non-printable characters");
    }
  }
  out.insert(out.end(), value.begin(), value.end());
  out.insert(out.end(), width - value.size(), ' ');
}

void PutInteger(std::vector<std::uint8_t>& out, long long value,
                std::size_t width, std::string_view name) {
  PutText(out, std::to_string(value), width, name);
}

double ReparseField(const std::string& field) {
  double v = 0.0;
  std::from_chars(field.data(), field.data() + field.size(), v);
  return v;
}

}  // namespace

std::string FormatNumberField(double value) {
  if (!std::isfinite(value)) {
    Fail(ErrorCode::kOutOfRange, "non-finite header number");
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  std::size_t len = static_cast<std::size_t>(res.ptr - buf);
  if (len <= 8) return std::string(buf, len);
  for (int precision = 8; precision >= 1; --precision) {
    int n = std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (n > 0 && n <= 8) return std::string(buf, static_cast<std::size_t>(n));
  }
  Fail(ErrorCode::kOutOfRange, "number does not fit an 8-character field");
}

EdfFile Parse(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFixedHeaderBytes) {
    Fail(ErrorCode::kTruncated, "file shorter than the 256-byte header");
  }
  EdfFile file;
  FileHeader& h = file.header;
  FieldReader r(bytes, 0);
  h.version = r.Text(8, "version");
  h.patient_id = r.Text(80, "patient_id");
  h.recording_id = r.Text(80, "recording_id");
  h.start_date = r.Text(8, "start_date");
  h.start_time = r.Text(8, "start_time");
  h.header_bytes = r.Integer(8, "header_bytes");
  h.reserved = r.Text(44, "reserved");
  h.num_records = r.Integer(8, "num_records");
  h.record_duration_s = r.Decimal(8, "record_duration");
  h.num_signals = r.Integer(4, "num_signals");

  if (h.num_signals < 1) {
    Fail(ErrorCode::kInvalidArgument, "num_signals must be >= 1");
  }
  if (h.header_bytes !=
      kFixedHeaderBytes + kSignalHeaderBytes * h.num_signals) {
    Fail(ErrorCode::kInvalidArgument,
         "header_bytes " + std::to_string(h.header_bytes) +
             " inconsistent with " + std::to_string(h.num_signals) +
             " signals");
  }
  if (!(h.record_duration_s > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "record duration must be positive");
  }
  if (h.num_records < -1 || h.num_records == 0) {
    Fail(ErrorCode::kInvalidArgument,
         "num_records must be >= 1 or -1 (unknown)");
  }
  if (bytes.size() < static_cast<std::size_t>(h.header_bytes)) {
    Fail(ErrorCode::kTruncated, "signal headers truncated");
  }

  // Signal headers are stored field-major: all labels, then all transducers...
  const int ns = h.num_signals;
  std::vector<SignalHeader> all(ns);
  for (auto& s : all) s.label = r.Text(16, "label");
  for (auto& s : all) s.transducer = r.Text(80, "transducer");
  for (auto& s : all) s.physical_dimension = r.Text(8, "physical_dimension");
  for (auto& s : all) s.physical_min = r.Decimal(8, "physical_min");
  for (auto& s : all) s.physical_max = r.Decimal(8, "physical_max");
  for (auto& s : all) s.digital_min = r.Integer(8, "digital_min");
  for (auto& s : all) s.digital_max = r.Integer(8, "digital_max");
  for (auto& s : all) s.prefiltering = r.Text(80, "prefiltering");
  for (auto& s : all) s.samples_per_record = r.Integer(8, "samples_per_record");
  for (auto& s : all) s.reserved = r.Text(32, "signal_reserved");

  std::vector<bool> is_annotation(ns, false);
  std::size_t record_samples = 0;
  for (int i = 0; i < ns; ++i) {
    is_annotation[i] = all[i].label == kAnnotationLabel;
    if (is_annotation[i]) {
      if (all[i].samples_per_record < 1) {
        Fail(ErrorCode::kInvalidArgument, "annotation signal has no samples");
      }
    } else {
      ValidateSignal(all[i], i);
    }
    record_samples += static_cast<std::size_t>(all[i].samples_per_record);
  }
  const std::size_t record_bytes = record_samples * 2;
  const std::size_t data_bytes = bytes.size() - h.header_bytes;

  std::size_t num_records = 0;
  if (h.num_records == -1) {
    num_records = data_bytes / record_bytes;
    if (num_records == 0) {
      Fail(ErrorCode::kTruncated, "no complete data record");
    }
    if (data_bytes % record_bytes != 0) {
      file.warnings.push_back("trailing partial data record ignored");
    }
  } else {
    num_records = static_cast<std::size_t>(h.num_records);
    if (data_bytes < num_records * record_bytes) {
      Fail(ErrorCode::kTruncated,
           "data section has " + std::to_string(data_bytes) +
               " bytes, header requires " +
               std::to_string(num_records * record_bytes));
    }
    if (data_bytes > num_records * record_bytes) {
      file.warnings.push_back("bytes beyond the declared data records ignored");
    }
  }

  std::vector<int> output_slot(ns, -1);
  for (int i = 0; i < ns; ++i) {
    if (is_annotation[i]) {
      file.warnings.push_back("annotation signal " + std::to_string(i) +
                              " skipped");
      continue;
    }
    output_slot[i] = static_cast<int>(file.signals.size());
    file.signals.push_back(all[i]);
    file.digital.emplace_back();
    file.digital.back().reserve(num_records * all[i].samples_per_record);
  }

  const std::uint8_t* p = bytes.data() + h.header_bytes;
  for (std::size_t rec = 0; rec < num_records; ++rec) {
    for (int i = 0; i < ns; ++i) {
      const int n = all[i].samples_per_record;
      if (output_slot[i] < 0) {
        p += 2 * n;
        continue;
      }
      auto& dst = file.digital[output_slot[i]];
      for (int k = 0; k < n; ++k, p += 2) {
        auto raw = static_cast<std::uint16_t>(p[0] | (p[1] << 8));
        dst.push_back(static_cast<std::int16_t>(raw));
      }
    }
  }
  return file;
}

EdfFile ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return Parse(bytes);
}

std::vector<std::uint8_t> Write(
    const FileHeader& header, const std::vector<SignalHeader>& signals,
    const std::vector<std::vector<double>>& physical) {
  if (signals.empty()) {
    Fail(ErrorCode::kInvalidArgument, "at least one signal is required");
  }
  if (physical.size() != signals.size()) {
    Fail(ErrorCode::kInvalidArgument, "one sample vector per signal required");
  }
  if (!(header.record_duration_s > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "record duration must be positive");
  }
  const int ns = static_cast<int>(signals.size());
  for (int i = 0; i < ns; ++i) ValidateSignal(signals[i], i);

  std::size_t num_records = 0;
  if (header.num_records > 0) {
    num_records = static_cast<std::size_t>(header.num_records);
  } else {
    num_records = physical[0].size() / signals[0].samples_per_record;
  }
  if (num_records == 0) {
    Fail(ErrorCode::kInvalidArgument, "at least one data record is required");
  }
  for (int i = 0; i < ns; ++i) {
    if (physical[i].size() != num_records * signals[i].samples_per_record) {
      Fail(ErrorCode::kInvalidArgument,
           "signal " + std::to_string(i) + " has " +
               std::to_string(physical[i].size()) +
               " samples, not a whole number of records (" +
               std::to_string(num_records) + " x " +
               std::to_string(signals[i].samples_per_record) + ")");
    }
  }

  std::size_t record_samples = 0;
  for (const auto& s : signals) record_samples += s.samples_per_record;
  const int header_bytes = kFixedHeaderBytes + kSignalHeaderBytes * ns;

  std::vector<std::uint8_t> out;
  out.reserve(header_bytes + num_records * record_samples * 2);
  PutText(out, header.version, 8, "version");
  PutText(out, header.patient_id, 80, "patient_id");
  PutText(out, header.recording_id, 80, "recording_id");
  PutText(out, header.start_date, 8, "start_date");
  PutText(out, header.start_time, 8, "start_time");
  PutInteger(out, header_bytes, 8, "header_bytes");
  PutText(out, header.reserved, 44, "reserved");
  PutInteger(out, static_cast<long long>(num_records), 8, "num_records");
  PutText(out, FormatNumberField(header.record_duration_s), 8,
          "record_duration");
  PutInteger(out, ns, 4, "num_signals");

  // Calibrate against the values a reader will see in the header.
  std::vector<SignalHeader> as_written = signals;
  for (auto& s : as_written) {
    s.physical_min = ReparseField(FormatNumberField(s.physical_min));
    s.physical_max = ReparseField(FormatNumberField(s.physical_max));
    ValidateSignal(s, 0);
  }

  for (const auto& s : signals) PutText(out, s.label, 16, "label");
  for (const auto& s : signals) PutText(out, s.transducer, 80, "transducer");
  for (const auto& s : signals) {
    PutText(out, s.physical_dimension, 8, "physical_dimension");
  }
  for (const auto& s : signals) {
    PutText(out, FormatNumberField(s.physical_min), 8, "physical_min");
  }
  for (const auto& s : signals) {
    PutText(out, FormatNumberField(s.physical_max), 8, "physical_max");
  }
  for (const auto& s : signals) PutInteger(out, s.digital_min, 8, "digital_min");
  for (const auto& s : signals) PutInteger(out, s.digital_max, 8, "digital_max");
  for (const auto& s : signals) PutText(out, s.prefiltering, 80, "prefiltering");
  for (const auto& s : signals) {
    PutInteger(out, s.samples_per_record, 8, "samples_per_record");
  }
  for (const auto& s : signals) PutText(out, s.reserved, 32, "signal_reserved");

  for (std::size_t rec = 0; rec < num_records; ++rec) {
    for (int i = 0; i < ns; ++i) {
      const std::size_t n = as_written[i].samples_per_record;
      for (std::size_t k = 0; k < n; ++k) {
        int code = PhysicalToDigital(physical[i][rec * n + k], as_written[i]);
        auto raw = static_cast<std::uint16_t>(static_cast<std::int16_t>(code));
        out.push_back(static_cast<std::uint8_t>(raw & 0xff));
        out.push_back(static_cast<std::uint8_t>(raw >> 8));
      }
    }
  }
  return out;
}

void WriteFile(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path);
}

double DigitalToPhysical(int code, const SignalHeader& s) {
  if (code < s.digital_min || code > s.digital_max) {
    Fail(ErrorCode::kOutOfRange, "digital code " + std::to_string(code) +
                                     " outside [" +
                                     std::to_string(s.digital_min) + ", " +
                                     std::to_string(s.digital_max) + "]");
  }
  if (code == s.digital_max) return s.physical_max;
  const double scale = (s.physical_max - s.physical_min) /
                       (static_cast<double>(s.digital_max) - s.digital_min);
  return s.physical_min + (static_cast<double>(code) - s.digital_min) * scale;
}

int PhysicalToDigital(double value, const SignalHeader& s) {
  if (std::isnan(value)) {
    Fail(ErrorCode::kInvalidArgument, "NaN sample cannot be encoded");
  }
  const double scale = (static_cast<double>(s.digital_max) - s.digital_min) /
                       (s.physical_max - s.physical_min);
  const double code = s.digital_min + (value - s.physical_min) * scale;
  const double rounded = std::round(code);
  if (!(rounded >= s.digital_min)) return s.digital_min;
  if (!(rounded <= s.digital_max)) return s.digital_max;
  return static_cast<int>(rounded);
}

double SampleRate(const FileHeader& header, const SignalHeader& signal) {
  return signal.samples_per_record / header.record_duration_s;
}

SignalTrace ToTrace(const EdfFile& file, int signal_index) {
  if (signal_index < 0 ||
      signal_index >= static_cast<int>(file.signals.size())) {
    Fail(ErrorCode::kOutOfRange,
         "signal index " + std::to_string(signal_index) + " out of range");
  }
  const SignalHeader& s = file.signals[signal_index];
  SignalTrace trace;
  trace.rate_hz = SampleRate(file.header, s);
  const auto& codes = file.digital[signal_index];
  trace.samples.reserve(codes.size());
  for (std::int16_t c : codes) {
    // Codes outside the declared digital range are clamped into it.
    int code = std::clamp<int>(c, s.digital_min, s.digital_max);
    trace.samples.push_back(DigitalToPhysical(code, s));
  }
  return trace;
}

}  // namespace eegpi::edf
