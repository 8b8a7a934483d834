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

#ifndef EEGPI_SPECTRUM_H_
#define EEGPI_SPECTRUM_H_

#include <span>
#include <vector>

namespace eegpi::dsp {

// One-sided power spectral density; density[k] is at k * resolution_hz.
struct Psd {
  double resolution_hz = 0.0;
  std::vector<double> density;

  double Frequency(std::size_t k) const { return k * resolution_hz; }
};

struct WelchParams {
  std::size_t segment_samples = 1024;
  double overlap = 0.5;
};

// Welch's method: periodic Hann window, per-segment mean removal, density
// scaling so that integrating the PSD recovers the signal variance. Throws if
// the signal is shorter than one segment.
Psd WelchPsd(std::span<const double> x, double rate_hz,
             const WelchParams& params);

// Sum of density * resolution over bins with low_hz <= f < high_hz, or
// f <= high_hz when `inclusive_high`.
double BandPower(const Psd& psd, double low_hz, double high_hz,
                 bool inclusive_high = false);

}  // namespace eegpi::dsp

#endif  // EEGPI_SPECTRUM_H_
