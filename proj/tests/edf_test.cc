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

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "eegpi/edf.h"
#include "test_util.h"

namespace {

using eegpi::testing::CodeOf;
using eegpi::ErrorCode;
namespace edf = eegpi::edf;

void Field(std::string& out, const std::string& text, std::size_t width) {
  std::string f = text.substr(0, width);
  f.resize(width, ' ');
  out += f;
}

// Hand-assembled single-signal EDF, independent of the library writer.
std::vector<std::uint8_t> HandBuiltEdf(const std::string& num_records,
                                       int samples_per_record,
                                       const std::vector<std::int16_t>& data) {
  std::string h;
  Field(h, "0", 8);
  Field(h, "X X X X", 80);
  Field(h, "Startdate X X X X", 80);
  Field(h, "01.01.00", 8);
  Field(h, "00.00.00", 8);
  Field(h, "512", 8);
  Field(h, "", 44);
  Field(h, num_records, 8);
  Field(h, "1", 8);
  Field(h, "1", 4);
  Field(h, "EEG", 16);
  Field(h, "AgAgCl electrode", 80);
  Field(h, "uV", 8);
  Field(h, "-1000", 8);
  Field(h, "1000", 8);
  Field(h, "-32768", 8);
  Field(h, "32767", 8);
  Field(h, "HP:0.1Hz", 80);
  Field(h, std::to_string(samples_per_record), 8);
  Field(h, "", 32);
  std::vector<std::uint8_t> bytes(h.begin(), h.end());
  for (std::int16_t v : data) {
    const auto u = static_cast<std::uint16_t>(v);
    bytes.push_back(static_cast<std::uint8_t>(u & 0xff));
    bytes.push_back(static_cast<std::uint8_t>(u >> 8));
  }
  return bytes;
}

edf::SignalHeader Calibrated(double pmin, double pmax) {
  edf::SignalHeader s;
  s.label = "EEG";
  s.physical_min = pmin;
  s.physical_max = pmax;
  return s;
}

}  // namespace

TEST_CASE("hand-built single-signal file parses with 512 header bytes") {
  const auto bytes = HandBuiltEdf("2", 4, {1, -2, 3, -4, 100, -100, 32767, -32768});
  REQUIRE(bytes.size() == 256 * 2 + 2 * 4 * 2);
  const edf::EdfFile f = edf::Parse(bytes);
  CHECK(f.header.header_bytes == 512);
  CHECK(f.header.num_signals == 1);
  CHECK(f.header.num_records == 2);
  CHECK(f.signals[0].label == "EEG");
  CHECK(f.signals[0].physical_dimension == "uV");
  CHECK(f.digital[0] ==
        std::vector<std::int16_t>{1, -2, 3, -4, 100, -100, 32767, -32768});
}

TEST_CASE("all-zero data record decodes to zero codes") {
  const auto bytes = HandBuiltEdf("1", 16, std::vector<std::int16_t>(16, 0));
  const edf::EdfFile f = edf::Parse(bytes);
  REQUIRE(f.digital[0].size() == 16);
  for (auto v : f.digital[0]) CHECK(v == 0);
}

TEST_CASE("non-numeric num_records is a parse error") {
  const auto bytes = HandBuiltEdf("abc", 4, std::vector<std::int16_t>(4, 0));
  CHECK(CodeOf([&] { edf::Parse(bytes); }) == ErrorCode::kParse);
}

TEST_CASE("short data section is reported as truncated") {
  auto bytes = HandBuiltEdf("2", 4, std::vector<std::int16_t>(8, 0));
  bytes.resize(bytes.size() - 3);
  CHECK(CodeOf([&] { edf::Parse(bytes); }) == ErrorCode::kTruncated);
  std::vector<std::uint8_t> tiny(100, ' ');
  CHECK(CodeOf([&] { edf::Parse(tiny); }) == ErrorCode::kTruncated);
}

TEST_CASE("calibration endpoints are exact") {
  const auto s = Calibrated(-1000.0, 1000.0);
  CHECK(edf::DigitalToPhysical(-32768, s) == -1000.0);
  CHECK(edf::DigitalToPhysical(32767, s) == 1000.0);
  CHECK(edf::PhysicalToDigital(-1000.0, s) == -32768);
  CHECK(edf::PhysicalToDigital(1000.0, s) == 32767);
}

TEST_CASE("code 0 maps to the linear-map value near 0.015259") {
  const auto s = Calibrated(-1000.0, 1000.0);
  // (code - dmin) * (pmax - pmin) / (dmax - dmin) + pmin, by hand.
  const double oracle = (0.0 + 32768.0) * 2000.0 / 65535.0 - 1000.0;
  CHECK(edf::DigitalToPhysical(0, s) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(edf::DigitalToPhysical(0, s) == doctest::Approx(0.015259).epsilon(1e-4));
}

TEST_CASE("out-of-range codes and NaN are rejected") {
  auto s = Calibrated(-1000.0, 1000.0);
  s.digital_min = -2048;
  s.digital_max = 2047;
  CHECK(CodeOf([&] { edf::DigitalToPhysical(2048, s); }) == ErrorCode::kOutOfRange);
  CHECK(CodeOf([&] { edf::PhysicalToDigital(std::nan(""), s); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("above physical_max clamps to digital_max") {
  const auto s = Calibrated(-500.0, 500.0);
  CHECK(edf::PhysicalToDigital(501.0, s) == 32767);
  CHECK(edf::PhysicalToDigital(1e9, s) == 32767);
  CHECK(edf::PhysicalToDigital(-1e9, s) == -32768);
}

TEST_CASE("200 codes survive digital -> physical -> digital") {
  for (const auto& s : {Calibrated(-1000.0, 1000.0), Calibrated(-3.2767, 3.2768),
                        Calibrated(0.0, 1.0)}) {
    int failures = 0;
    for (int i = 0; i < 200; ++i) {
      const int code = -32768 + (i * 65535) / 199;
      if (edf::PhysicalToDigital(edf::DigitalToPhysical(code, s), s) != code) {
        ++failures;
      }
    }
    CHECK(failures == 0);
  }
}

TEST_CASE("write then parse is bit-exact and the size matches the layout") {
  edf::FileHeader header;
  header.num_records = 10;
  header.record_duration_s = 1.0;
  std::vector<edf::SignalHeader> signals = {Calibrated(-1000.0, 1000.0),
                                            Calibrated(-200.0, 200.0)};
  signals[0].samples_per_record = 256;
  signals[1].samples_per_record = 128;
  std::vector<std::vector<double>> physical(2);
  for (int i = 0; i < 2560; ++i) physical[0].push_back(900.0 * std::sin(i * 0.01));
  for (int i = 0; i < 1280; ++i) physical[1].push_back(150.0 * std::cos(i * 0.03));

  const auto bytes = edf::Write(header, signals, physical);
  const std::size_t expected_size = 256 * (2 + 1) + 10 * (256 + 128) * 2;
  CHECK(bytes.size() == expected_size);

  const edf::EdfFile f = edf::Parse(bytes);
  CHECK(f.header.header_bytes == 768);
  CHECK(f.header.num_records == 10);
  REQUIRE(f.digital.size() == 2);
  for (int k = 0; k < 2; ++k) {
    std::vector<std::int16_t> expected;
    for (double v : physical[k]) {
      expected.push_back(static_cast<std::int16_t>(edf::PhysicalToDigital(v, f.signals[k])));
    }
    CHECK(f.digital[k] == expected);
  }
  CHECK(edf::SampleRate(f.header, f.signals[0]) == 256.0);

  // Rewriting the decoded physical values reproduces the same bytes.
  std::vector<std::vector<double>> decoded(2);
  for (int k = 0; k < 2; ++k) {
    for (auto code : f.digital[k]) {
      decoded[k].push_back(edf::DigitalToPhysical(code, f.signals[k]));
    }
  }
  CHECK(edf::Write(f.header, f.signals, decoded) == bytes);
}

TEST_CASE("writer clamps samples beyond physical_max") {
  edf::FileHeader header;
  header.num_records = 1;
  std::vector<edf::SignalHeader> signals = {Calibrated(-100.0, 100.0)};
  signals[0].samples_per_record = 4;
  const auto bytes = edf::Write(header, signals, {{150.0, 100.0, -100.0, -1e6}});
  const edf::EdfFile f = edf::Parse(bytes);
  CHECK(f.digital[0] == std::vector<std::int16_t>{32767, 32767, -32768, -32768});
}

TEST_CASE("writer rejects sample counts that do not fill the records") {
  edf::FileHeader header;
  header.num_records = 2;
  std::vector<edf::SignalHeader> signals = {Calibrated(-1.0, 1.0)};
  signals[0].samples_per_record = 4;
  CHECK(CodeOf([&] { edf::Write(header, signals, {{0.0, 0.0, 0.0}}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("file round-trip through disk") {
  const auto dir = eegpi::testing::ScratchDir("edf_file");
  const auto bytes = HandBuiltEdf("1", 4, {5, 6, 7, 8});
  edf::WriteFile((dir / "a.edf").string(), bytes);
  const edf::EdfFile f = edf::ReadFile((dir / "a.edf").string());
  CHECK(f.digital[0] == std::vector<std::int16_t>{5, 6, 7, 8});
  const edf::SignalTrace t = edf::ToTrace(f, 0);
  CHECK(t.rate_hz == 4.0);
  CHECK(t.samples.size() == 4);
  CHECK(CodeOf([&] { edf::ReadFile((dir / "missing.edf").string()); }) ==
        ErrorCode::kIo);
}

TEST_CASE("number fields fit in eight characters") {
  CHECK(edf::FormatNumberField(123456789.0).size() <= 8);
  for (double v : {0.0, -1000.0, 1000.0, 0.015259, -3.14159265358979, -1.0e-7}) {
    const std::string s = edf::FormatNumberField(v);
    CHECK(s.size() <= 8);
    CHECK(std::stod(s) == doctest::Approx(v).epsilon(1e-5).scale(1e-6));
  }
}
