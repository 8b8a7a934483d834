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

#include "eegpi/spectrum.h"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "eegpi/common.h"

namespace eegpi::dsp {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// FFTW planning is not thread-safe; execution of a finished plan on new
// arrays is. Plans are created once per length and kept for the process.
fftw_plan PlanFor(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, PlanPtr> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second.get();
  std::vector<double> in(n);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan p = fftw_plan_dft_r2c_1d(
      static_cast<int>(n), in.data(),
      reinterpret_cast<fftw_complex*>(out.data()),
      FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
  if (p == nullptr) throw Error(ErrorCode::kInternal, "fftw planning failed");
  plans.emplace(n, PlanPtr(p));
  return p;
}

}  // namespace

Psd WelchPsd(std::span<const double> x, double rate_hz,
             const WelchParams& params) {
  const std::size_t n = params.segment_samples;
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "welch segment must be >= 2");
  }
  if (!(params.overlap >= 0.0 && params.overlap < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "welch overlap must be in [0, 1)");
  }
  if (x.size() < n) {
    throw Error(ErrorCode::kInvalidArgument,
                "signal of " + std::to_string(x.size()) +
                    " samples is shorter than one welch segment (" +
                    std::to_string(n) + ")");
  }
  const std::size_t step = std::max<std::size_t>(
      1, n - static_cast<std::size_t>(std::llround(params.overlap * n)));

  std::vector<double> window(n);
  double window_power = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
    window_power += window[i] * window[i];
  }

  const std::size_t bins = n / 2 + 1;
  Psd psd;
  psd.resolution_hz = rate_hz / n;
  psd.density.assign(bins, 0.0);

  fftw_plan plan = PlanFor(n);
  std::vector<double> segment(n);
  std::vector<std::complex<double>> spectrum(bins);
  std::size_t count = 0;
  for (std::size_t start = 0; start + n <= x.size(); start += step, ++count) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x[start + i];
    mean /= n;
    for (std::size_t i = 0; i < n; ++i) {
      segment[i] = (x[start + i] - mean) * window[i];
    }
    fftw_execute_dft_r2c(plan, segment.data(),
                         reinterpret_cast<fftw_complex*>(spectrum.data()));
    for (std::size_t k = 0; k < bins; ++k) {
      psd.density[k] += std::norm(spectrum[k]);
    }
  }

  const double scale = 1.0 / (rate_hz * window_power * count);
  for (std::size_t k = 0; k < bins; ++k) {
    const bool edge = k == 0 || (n % 2 == 0 && k == bins - 1);
    psd.density[k] *= scale * (edge ? 1.0 : 2.0);
  }
  return psd;
}

double BandPower(const Psd& psd, double low_hz, double high_hz,
                 bool inclusive_high) {
  double sum = 0.0;
  for (std::size_t k = 0; k < psd.density.size(); ++k) {
    const double f = psd.Frequency(k);
    if (f < low_hz) continue;
    if (inclusive_high ? f > high_hz : f >= high_hz) continue;
    sum += psd.density[k];
  }
  return sum * psd.resolution_hz;
}

}  // namespace eegpi::dsp
