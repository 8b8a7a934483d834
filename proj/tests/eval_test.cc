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

#include <algorithm>
#include <filesystem>
#include <memory>
#include <set>
#include <vector>

#include "doctest.h"
#include "eegpi/cross_validation.h"
#include "eegpi/dataset.h"
#include "eegpi/metrics.h"
#include "eegpi/rng.h"
#include "eegpi/synth.h"
#include "test_util.h"

namespace {

namespace ev = eegpi::eval;
namespace ft = eegpi::features;
using eegpi::ClassLabel;
using eegpi::ErrorCode;
using eegpi::testing::CodeOf;
using eegpi::testing::ScratchDir;
using eegpi::testing::Slurp;

ev::ConfusionMatrix FromCounts(const std::vector<std::vector<int>>& c) {
  ev::ConfusionMatrix::Counts counts{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) counts[i][j] = c[i][j];
  }
  return ev::ConfusionMatrix(counts);
}

// Two labels per class on feature 0; a tiny trainer for CV plumbing.
std::vector<eegpi::gbt::LabeledVector> ToyVectors(std::uint64_t seed, int n) {
  eegpi::Rng rng(seed);
  std::vector<eegpi::gbt::LabeledVector> out;
  for (int i = 0; i < n; ++i) {
    const int k = static_cast<int>(rng.Below(4));
    out.push_back({{{k + 0.8 * rng.Normal(), rng.Normal()}, "toy"},
                   eegpi::ClassFromIndex(k)});
  }
  return out;
}

ev::Trainer ToyTrainer() {
  return [](std::span<const eegpi::gbt::LabeledVector> train) {
    eegpi::gbt::TrainConfig cfg;
    cfg.rounds = 10;
    auto model = std::make_shared<eegpi::gbt::GbtModel>(
        eegpi::gbt::Train(train, cfg, {{"schema_id", "toy"}}).model);
    return ev::Predictor([model](const ft::FeatureVector& fv) {
      return model->PredictClass(fv).label;
    });
  };
}

}  // namespace

TEST_CASE("perfect predictions give a diagonal matrix") {
  const std::vector<int> y = {0, 1, 2, 3, 3, 2, 1, 0, 0};
  const auto cm = ev::Confusion(y, y);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) CHECK(cm.at(i, j) == 0);
    }
  }
  CHECK(cm.trace() == 9);
  const auto m = ev::ComputeMetrics(cm);
  CHECK(m.accuracy == 1.0);
  for (int c = 0; c < 4; ++c) {
    CHECK(m.precision[c] == 1.0);
    CHECK(m.recall[c] == 1.0);
  }
}

TEST_CASE("hand-counted confusion") {
  const std::vector<int> truth = {0, 0, 1};
  const std::vector<int> pred = {0, 1, 1};
  const auto cm = ev::Confusion(truth, pred);
  CHECK(cm.at(0, 0) == 1);
  CHECK(cm.at(0, 1) == 1);
  CHECK(cm.at(1, 1) == 1);
  CHECK(cm.total() == 3);

  const std::vector<int> one = {2};
  const std::vector<int> other = {3};
  const auto single = ev::Confusion(one, other);
  int nonzero = 0;
  for (const auto& row : single.counts()) {
    for (auto v : row) nonzero += v != 0;
  }
  CHECK(nonzero == 1);
  CHECK(single.at(2, 3) == 1);

  const std::vector<int> bad = {4};
  CHECK(CodeOf([&] { ev::Confusion(bad, bad); }) == ErrorCode::kOutOfRange);
  const std::vector<int> two = {0, 1};
  CHECK(CodeOf([&] { ev::Confusion(two, one); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("hand-computed metrics on a 4x4 matrix") {
  const auto cm = FromCounts({{5, 5, 0, 0}, {0, 5, 0, 0}, {0, 0, 5, 0}, {0, 0, 0, 5}});
  const auto m = ev::ComputeMetrics(cm);
  CHECK(m.accuracy == doctest::Approx(0.8));
  CHECK(*m.precision[1] == doctest::Approx(0.5));
  CHECK(*m.recall[0] == doctest::Approx(0.5));
  CHECK(*m.precision[0] == 1.0);
  CHECK(*m.recall[1] == 1.0);
}

TEST_CASE("undefined precision and recall are reported as null") {
  const auto cm = FromCounts({{3, 0, 0, 0}, {2, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}});
  const auto m = ev::ComputeMetrics(cm);
  CHECK_FALSE(m.precision[1].has_value());  // never predicted
  CHECK_FALSE(m.recall[2].has_value());     // never occurs
  CHECK(m.recall[1] == 0.0);
  const auto j = ev::ToJson(m);
  CHECK(j["classes"]["TbiWake"]["recall"].is_null());
  CHECK(j["classes"]["ShamSleep"]["precision"].is_null());
}

TEST_CASE("metrics agree with a brute-force recount") {
  eegpi::Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.Below(60);
    std::vector<int> truth(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = static_cast<int>(rng.Below(4));
      pred[i] = rng.Uniform() < 0.6 ? truth[i] : static_cast<int>(rng.Below(4));
    }
    const auto cm = ev::Confusion(truth, pred);
    const auto m = ev::ComputeMetrics(cm);

    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) correct += truth[i] == pred[i];
    bool ok = m.accuracy == static_cast<double>(correct) / n;
    double ovr = 0.0;
    for (int c = 0; c < 4; ++c) {
      std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const bool t = truth[i] == c, p = pred[i] == c;
        tp += t && p;
        fp += !t && p;
        fn += t && !p;
        tn += !t && !p;
      }
      ok = ok && cm.TruePositives(c) == static_cast<std::int64_t>(tp) &&
           cm.FalsePositives(c) == static_cast<std::int64_t>(fp) &&
           cm.FalseNegatives(c) == static_cast<std::int64_t>(fn) &&
           cm.TrueNegatives(c) == static_cast<std::int64_t>(tn);
      if (tp + fp == 0) {
        ok = ok && !m.precision[c].has_value();
      } else {
        ok = ok && m.precision[c] == static_cast<double>(tp) / (tp + fp);
      }
      if (tp + fn == 0) {
        ok = ok && !m.recall[c].has_value();
      } else {
        ok = ok && m.recall[c] == static_cast<double>(tp) / (tp + fn);
      }
      ovr += static_cast<double>(tp + tn) / n;
    }
    CHECK(ok);
    CHECK(ev::OneVsRestAccuracy(cm) == doctest::Approx(ovr / 4));
    // Closed form: every correct row counts once as TP and three times as
    // TN, every error counts twice as TN.
    CHECK(ev::OneVsRestAccuracy(cm) ==
          doctest::Approx((static_cast<double>(correct) + n) / (2.0 * n)));
  }
}

TEST_CASE("folds partition the index set") {
  const auto folds = ev::MakeFolds(100, {10, 3});
  REQUIRE(folds.size() == 10);
  std::set<std::size_t> seen;
  for (const auto& f : folds) {
    CHECK(f.size() == 10);
    for (auto i : f) CHECK(seen.insert(i).second);
  }
  CHECK(seen.size() == 100);
  CHECK(*seen.rbegin() == 99);
  CHECK(ev::MakeFolds(100, {10, 3}) == folds);
  CHECK(ev::MakeFolds(100, {10, 4}) != folds);
  const auto uneven = ev::MakeFolds(23, {5, 1});
  std::size_t total = 0;
  for (const auto& f : uneven) {
    CHECK(f.size() >= 4);
    CHECK(f.size() <= 5);
    total += f.size();
  }
  CHECK(total == 23);
}

TEST_CASE("more folds than items is an error") {
  CHECK(CodeOf([] { ev::MakeFolds(5, {10, 0}); }) == ErrorCode::kInvalidArgument);
  CHECK(CodeOf([] { ev::MakeFolds(5, {1, 0}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("cross-validation is deterministic for a fixed seed") {
  const auto data = ToyVectors(3, 200);
  const auto a = ev::KFoldCv(data, ToyTrainer(), {10, 7});
  const auto b = ev::KFoldCv(data, ToyTrainer(), {10, 7});
  CHECK(a.pooled == b.pooled);
  CHECK(ev::ToJson(a.mean).dump() == ev::ToJson(b.mean).dump());
  CHECK(a.pooled.total() == 200);
  CHECK(a.fold_confusion.size() == 10);
  ev::ConfusionMatrix sum;
  double mean_acc = 0.0;
  for (std::size_t k = 0; k < 10; ++k) {
    sum += a.fold_confusion[k];
    mean_acc += a.fold_metrics[k].accuracy / 10.0;
  }
  CHECK(sum == a.pooled);
  CHECK(a.mean.accuracy == doctest::Approx(mean_acc).epsilon(1e-12));
  CHECK(a.mean.accuracy > 0.5);
}

TEST_CASE("synthetic dataset is seeded and labeled") {
  eegpi::synth::SyntheticSpec spec;
  spec.epochs_per_class = 50;
  spec.epoch_length_s = 16;
  const auto dir_a = ScratchDir("synth_a");
  const auto dir_b = ScratchDir("synth_b");
  const auto layout = eegpi::synth::WriteDataset(spec, dir_a.string());
  eegpi::synth::WriteDataset(spec, dir_b.string());
  CHECK(layout.rows.size() == 200);
  for (const auto& f : layout.files) {
    CHECK(Slurp(dir_a / f) == Slurp(dir_b / f));
  }
  CHECK(Slurp(dir_a / "labels.csv") == Slurp(dir_b / "labels.csv"));
  const auto rows = eegpi::dataset::ParseLabelCsv(Slurp(dir_a / "labels.csv"));
  CHECK(rows.size() == 200);
  std::array<int, 4> per_class{};
  for (const auto& r : rows) ++per_class[eegpi::ClassIndex(r.label)];
  for (int c : per_class) CHECK(c == 50);

  const auto epochs = eegpi::dataset::LoadEpochs(dir_a.string());
  CHECK(epochs.size() == 200);
  CHECK(epochs.front().samples.size() == 4096);

  auto other_seed = spec;
  other_seed.seed = spec.seed + 1;
  const auto dir_c = ScratchDir("synth_c");
  eegpi::synth::WriteDataset(other_seed, dir_c.string());
  CHECK(Slurp(dir_a / layout.files[0]) != Slurp(dir_c / layout.files[0]));
}

TEST_CASE("sleep epochs carry more relative delta power than wake epochs") {
  eegpi::synth::SyntheticSpec spec;
  spec.epochs_per_class = 30;
  const auto epochs = eegpi::synth::GenerateEpochs(spec);
  double sleep = 0, wake = 0;
  int ns = 0, nw = 0;
  for (const auto& e : epochs) {
    const double rel = ft::PreprocessAndExtract(e).values[ft::kRelDelta];
    if (e.label == ClassLabel::kShamSleep) sleep += rel, ++ns;
    if (e.label == ClassLabel::kShamWake) wake += rel, ++nw;
  }
  REQUIRE(ns == 30);
  REQUIRE(nw == 30);
  CHECK(sleep / ns > wake / nw);
}

TEST_CASE("label csv and dataset errors") {
  CHECK(CodeOf([] { eegpi::dataset::ParseLabelCsv("file,epoch_index,class\na.edf,0,Awake\n"); }) ==
        ErrorCode::kParse);
  CHECK(CodeOf([] { eegpi::dataset::ParseLabelCsv("wrong,header\n"); }) ==
        ErrorCode::kParse);
  const auto empty = ScratchDir("empty_dataset");
  CHECK_THROWS_AS(eegpi::dataset::LoadEpochs(empty.string()), eegpi::Error);
}

TEST_CASE("synthetic spec JSON round-trips and rejects unknown keys") {
  eegpi::synth::SyntheticSpec spec;
  spec.noise_uv = 3.5;
  spec.seed = 99;
  const auto back = eegpi::synth::SyntheticSpec::FromJson(spec.ToJson());
  CHECK(back.ToJson() == spec.ToJson());
  auto j = nlohmann::json(spec.ToJson());
  j["bogus"] = 1;
  CHECK(CodeOf([&] { eegpi::synth::SyntheticSpec::FromJson(j); }) ==
        ErrorCode::kInvalidArgument);
}
