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

#include "eegpi/features.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>

#include "eegpi/common.h"
#include "eegpi/filter.h"
#include "eegpi/spectrum.h"

namespace eegpi::features {
namespace {

constexpr int kSchemaVersion = 1;

std::uint64_t Fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double SafeRatio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

struct Moments {
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
};

Moments CentralMoments(std::span<const double> x) {
  Moments m;
  if (x.empty()) return m;
  const double n = static_cast<double>(x.size());
  m.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  for (double v : x) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m.m2 += d2;
    m.m3 += d2 * d;
    m.m4 += d2 * d2;
  }
  m.m2 /= n;
  m.m3 /= n;
  m.m4 /= n;
  return m;
}

double Variance(std::span<const double> x) { return CentralMoments(x).m2; }

std::vector<double> Diff(std::span<const double> x) {
  std::vector<double> d;
  if (x.size() < 2) return d;
  d.reserve(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) d.push_back(x[i] - x[i - 1]);
  return d;
}

bool IsConstant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
}

}  // namespace

void PreprocessConfig::Validate(double rate_hz) const {
  if (!(band_low_hz > 0.0 && band_low_hz < band_high_hz &&
        band_high_hz < rate_hz / 2.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "preprocess band must satisfy 0 < low < high < rate/2");
  }
  if (filter_order < 1) {
    throw Error(ErrorCode::kInvalidArgument, "filter order must be >= 1");
  }
}

Preprocessed Preprocess(const Epoch& epoch, const PreprocessConfig& config) {
  config.Validate(epoch.rate_hz);
  if (epoch.samples.size() != EpochSampleCount(epoch.length_s, epoch.rate_hz)) {
    throw Error(ErrorCode::kInvalidArgument,
                "epoch sample count does not match length_s * rate_hz");
  }
  Preprocessed out;
  out.epoch = epoch;
  if (epoch.samples.empty()) return out;
  if (config.normalize && IsConstant(epoch.samples)) {
    out.normalization_skipped = true;
    return out;
  }

  dsp::BiquadCascade filter = dsp::DesignButterworthBandpass(
      config.band_low_hz, config.band_high_hz, config.filter_order,
      epoch.rate_hz);
  filter.InitSteadyState(epoch.samples.front());
  out.epoch.samples = filter.Process(epoch.samples);

  if (config.normalize) {
    const Moments m = CentralMoments(out.epoch.samples);
    const double sd = std::sqrt(m.m2);
    if (!(sd > 0.0)) {
      out.normalization_skipped = true;
    } else {
      for (double& v : out.epoch.samples) v = (v - m.mean) / sd;
    }
  }
  return out;
}

const std::array<std::string_view, kNumFeatures>& FeatureNames() {
  static const std::array<std::string_view, kNumFeatures> names = {
      "abs_power_delta", "abs_power_theta", "abs_power_alpha",
      "abs_power_beta", "abs_power_gamma", "rel_power_delta",
      "rel_power_theta", "rel_power_alpha", "rel_power_beta",
      "rel_power_gamma", "ratio_theta_delta", "ratio_alpha_delta",
      "ratio_beta_alpha_theta", "variance", "skewness", "kurtosis",
      "zero_crossing_rate", "hjorth_mobility", "hjorth_complexity",
      "spectral_entropy", "spectral_edge_95"};
  return names;
}

FeatureSchema::FeatureSchema(PreprocessConfig preprocess)
    : preprocess_(preprocess) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fs%d-%016llx", kSchemaVersion,
                static_cast<unsigned long long>(Fnv1a64(Content().dump())));
  id_ = buf;
}

nlohmann::json FeatureSchema::Content() const {
  nlohmann::json bands = nlohmann::json::array();
  for (const Band& b : kBands) {
    bands.push_back({{"name", b.name}, {"low_hz", b.low_hz}, {"high_hz", b.high_hz}});
  }
  nlohmann::json names = nlohmann::json::array();
  for (auto n : FeatureNames()) names.push_back(n);
  return {
      {"schema_version", kSchemaVersion},
      {"features", names},
      {"bands", bands},
      {"preprocess",
       {{"filter", "butterworth_highpass_lowpass_causal"},
        {"band_low_hz", preprocess_.band_low_hz},
        {"band_high_hz", preprocess_.band_high_hz},
        {"filter_order", preprocess_.filter_order},
        {"normalize", preprocess_.normalize}}},
      {"welch",
       {{"segment_s", welch_segment_s_},
        {"overlap", welch_overlap_},
        {"window", "hann_periodic"},
        {"detrend", "mean"}}},
      {"spectral_range_hz", {kBands.front().low_hz, kBands.back().high_hz}},
      {"edge_fraction", edge_fraction_},
  };
}

nlohmann::json FeatureSchema::Descriptor() const {
  nlohmann::json d = Content();
  d["schema_id"] = id_;
  return d;
}

FeatureSchema FeatureSchema::FromDescriptor(const nlohmann::json& descriptor) {
  try {
    if (descriptor.at("schema_version").get<int>() != kSchemaVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "unsupported feature schema version");
    }
    const auto& p = descriptor.at("preprocess");
    PreprocessConfig config;
    config.band_low_hz = p.at("band_low_hz").get<double>();
    config.band_high_hz = p.at("band_high_hz").get<double>();
    config.filter_order = p.at("filter_order").get<int>();
    config.normalize = p.at("normalize").get<bool>();
    FeatureSchema schema(config);
    nlohmann::json expected = schema.Descriptor();
    if (expected != descriptor) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "feature schema descriptor does not match this build "
                  "(expected " + schema.id() + ", got " +
                      descriptor.value("schema_id", std::string("?")) + ")");
    }
    return schema;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("malformed feature schema descriptor: ") + e.what());
  }
}

FeatureVector Extract(const Epoch& epoch, const FeatureSchema& schema) {
  std::span<const double> x = epoch.samples;
  const double rate = epoch.rate_hz;
  dsp::WelchParams welch;
  welch.segment_samples =
      static_cast<std::size_t>(std::llround(schema.welch_segment_s() * rate));
  welch.overlap = schema.welch_overlap();
  if (x.size() < welch.segment_samples || welch.segment_samples < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "epoch shorter than one welch segment");
  }
  const dsp::Psd psd = dsp::WelchPsd(x, rate, welch);

  FeatureVector fv;
  fv.schema_id = schema.id();
  std::vector<double>& v = fv.values;
  v.assign(kNumFeatures, 0.0);

  double total = 0.0;
  for (std::size_t b = 0; b < kBands.size(); ++b) {
    const bool last = b + 1 == kBands.size();
    v[kAbsDelta + b] =
        dsp::BandPower(psd, kBands[b].low_hz, kBands[b].high_hz, last);
    total += v[kAbsDelta + b];
  }
  for (std::size_t b = 0; b < kBands.size(); ++b) {
    v[kRelDelta + b] = SafeRatio(v[kAbsDelta + b], total);
  }
  v[kThetaDeltaRatio] = SafeRatio(v[kAbsTheta], v[kAbsDelta]);
  v[kAlphaDeltaRatio] = SafeRatio(v[kAbsAlpha], v[kAbsDelta]);
  v[kBetaAlphaThetaRatio] = SafeRatio(v[kAbsBeta], v[kAbsAlpha] + v[kAbsTheta]);

  const Moments m = CentralMoments(x);
  v[kVariance] = m.m2;
  if (m.m2 > 0.0) {
    v[kSkewness] = m.m3 / std::pow(m.m2, 1.5);
    v[kKurtosis] = m.m4 / (m.m2 * m.m2);
  }

  std::size_t crossings = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if ((x[i - 1] < 0.0) != (x[i] < 0.0)) ++crossings;
  }
  v[kZeroCrossingRate] =
      x.size() > 1 ? static_cast<double>(crossings) / (x.size() - 1) : 0.0;

  const std::vector<double> dx = Diff(x);
  const std::vector<double> ddx = Diff(dx);
  const double var_dx = Variance(dx);
  const double mobility = std::sqrt(SafeRatio(var_dx, m.m2));
  const double mobility_dx = std::sqrt(SafeRatio(Variance(ddx), var_dx));
  v[kHjorthMobility] = mobility;
  v[kHjorthComplexity] = SafeRatio(mobility_dx, mobility);

  // Entropy and edge frequency over the bins of the analysed range.
  const double lo = kBands.front().low_hz;
  const double hi = kBands.back().high_hz;
  double in_range = 0.0;
  std::size_t range_bins = 0;
  for (std::size_t k = 0; k < psd.density.size(); ++k) {
    const double f = psd.Frequency(k);
    if (f >= lo && f <= hi) {
      in_range += psd.density[k];
      ++range_bins;
    }
  }
  if (in_range > 0.0 && range_bins > 1) {
    double entropy = 0.0;
    double cumulative = 0.0;
    bool edge_found = false;
    for (std::size_t k = 0; k < psd.density.size(); ++k) {
      const double f = psd.Frequency(k);
      if (f < lo || f > hi) continue;
      const double p = psd.density[k] / in_range;
      if (p > 0.0) entropy -= p * std::log(p);
      cumulative += p;
      if (!edge_found && cumulative >= schema.edge_fraction()) {
        v[kSpectralEdge95] = f;
        edge_found = true;
      }
    }
    v[kSpectralEntropy] = entropy / std::log(static_cast<double>(range_bins));
    if (!edge_found) v[kSpectralEdge95] = hi;
  }

  for (double& value : v) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::kInternal, "non-finite feature value");
    }
  }
  return fv;
}

FeatureVector PreprocessAndExtract(const Epoch& epoch,
                                   const FeatureSchema& schema) {
  return Extract(Preprocess(epoch, schema.preprocess()).epoch, schema);
}

}  // namespace eegpi::features
