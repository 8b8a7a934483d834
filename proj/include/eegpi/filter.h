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

#ifndef EEGPI_FILTER_H_
#define EEGPI_FILTER_H_

#include <complex>
#include <span>
#include <vector>

namespace eegpi::dsp {

// y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  std::complex<double> Response(double freq_hz, double rate_hz) const;
  double DcGain() const { return (b0 + b1 + b2) / (1.0 + a1 + a2); }
};

// Causal cascade of second-order sections in transposed direct form II.
class BiquadCascade {
 public:
  BiquadCascade() = default;
  explicit BiquadCascade(std::vector<Biquad> sections);

  // Sets the state so a constant input equal to `x` produces the steady
  // output immediately.
  void InitSteadyState(double x);
  void Reset();
  double Step(double x);
  std::vector<double> Process(std::span<const double> x);

  // |H(f)| of the whole cascade.
  double Magnitude(double freq_hz, double rate_hz) const;
  const std::vector<Biquad>& sections() const { return sections_; }

 private:
  struct State {
    double z1 = 0.0, z2 = 0.0;
  };
  std::vector<Biquad> sections_;
  std::vector<State> state_;
};

// Butterworth high-pass at low_hz cascaded with a Butterworth low-pass at
// high_hz, each of the given order, by bilinear transform with the cutoffs
// prewarped. Throws unless 0 < low_hz < high_hz < rate_hz / 2, order >= 1.
BiquadCascade DesignButterworthBandpass(double low_hz, double high_hz,
                                        int order, double rate_hz);

}  // namespace eegpi::dsp

#endif  // EEGPI_FILTER_H_
