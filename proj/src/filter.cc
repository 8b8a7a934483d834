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

#include "eegpi/filter.h"

#include <cmath>
#include <numbers>

#include "eegpi/common.h"

namespace eegpi::dsp {
namespace {

enum class Kind { kLowPass, kHighPass };

Biquad SecondOrder(Kind kind, double cutoff_hz, double q, double rate_hz) {
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / rate_hz;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  Biquad s;
  if (kind == Kind::kLowPass) {
    s.b0 = (1.0 - cw) / 2.0 / a0;
    s.b1 = (1.0 - cw) / a0;
    s.b2 = s.b0;
  } else {
    s.b0 = (1.0 + cw) / 2.0 / a0;
    s.b1 = -(1.0 + cw) / a0;
    s.b2 = s.b0;
  }
  s.a1 = -2.0 * cw / a0;
  s.a2 = (1.0 - alpha) / a0;
  return s;
}

Biquad FirstOrder(Kind kind, double cutoff_hz, double rate_hz) {
  const double k = std::tan(std::numbers::pi * cutoff_hz / rate_hz);
  Biquad s;
  if (kind == Kind::kLowPass) {
    s.b0 = k / (1.0 + k);
    s.b1 = s.b0;
  } else {
    s.b0 = 1.0 / (1.0 + k);
    s.b1 = -s.b0;
  }
  s.a1 = (k - 1.0) / (k + 1.0);
  return s;
}

void AppendButterworth(std::vector<Biquad>& out, Kind kind, double cutoff_hz,
                       int order, double rate_hz) {
  const double pi = std::numbers::pi;
  if (order % 2 == 1) {
    out.push_back(FirstOrder(kind, cutoff_hz, rate_hz));
    for (int k = 1; k <= order / 2; ++k) {
      const double q = 1.0 / (2.0 * std::cos(k * pi / order));
      out.push_back(SecondOrder(kind, cutoff_hz, q, rate_hz));
    }
  } else {
    for (int k = 1; k <= order / 2; ++k) {
      const double q = 1.0 / (2.0 * std::cos((2 * k - 1) * pi / (2.0 * order)));
      out.push_back(SecondOrder(kind, cutoff_hz, q, rate_hz));
    }
  }
}

}  // namespace

std::complex<double> Biquad::Response(double freq_hz, double rate_hz) const {
  const std::complex<double> z1 =
      std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / rate_hz);
  const std::complex<double> z2 = z1 * z1;
  return (b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2);
}

BiquadCascade::BiquadCascade(std::vector<Biquad> sections)
    : sections_(std::move(sections)), state_(sections_.size()) {}

void BiquadCascade::Reset() {
  for (State& s : state_) s = {};
}

void BiquadCascade::InitSteadyState(double x) {
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    const Biquad& s = sections_[i];
    const double y = s.DcGain() * x;
    state_[i].z2 = s.b2 * x - s.a2 * y;
    state_[i].z1 = y - s.b0 * x;
    x = y;
  }
}

double BiquadCascade::Step(double x) {
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    const Biquad& s = sections_[i];
    State& st = state_[i];
    const double y = s.b0 * x + st.z1;
    st.z1 = s.b1 * x - s.a1 * y + st.z2;
    st.z2 = s.b2 * x - s.a2 * y;
    x = y;
  }
  return x;
}

std::vector<double> BiquadCascade::Process(std::span<const double> x) {
  std::vector<double> y;
  y.reserve(x.size());
  for (double v : x) y.push_back(Step(v));
  return y;
}

double BiquadCascade::Magnitude(double freq_hz, double rate_hz) const {
  std::complex<double> h = 1.0;
  for (const Biquad& s : sections_) h *= s.Response(freq_hz, rate_hz);
  return std::abs(h);
}

BiquadCascade DesignButterworthBandpass(double low_hz, double high_hz,
                                        int order, double rate_hz) {
  if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < rate_hz / 2.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "band-pass needs 0 < low < high < rate/2");
  }
  if (order < 1) {
    throw Error(ErrorCode::kInvalidArgument, "filter order must be >= 1");
  }
  std::vector<Biquad> sections;
  AppendButterworth(sections, Kind::kHighPass, low_hz, order, rate_hz);
  AppendButterworth(sections, Kind::kLowPass, high_hz, order, rate_hz);
  return BiquadCascade(std::move(sections));
}

}  // namespace eegpi::dsp
