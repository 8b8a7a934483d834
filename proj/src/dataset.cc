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

#include "eegpi/dataset.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "eegpi/edf.h"
#include "eegpi/pipeline.h"
#include "json.hpp"

namespace eegpi::dataset {
namespace {

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<LabelRow> ParseLabelCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kParse, "labels: missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "file,epoch_index,class") {
    throw Error(ErrorCode::kParse, "labels: header must be file,epoch_index,class");
  }
  std::vector<LabelRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw Error(ErrorCode::kParse,
                  "labels: line " + std::to_string(line_no) + " needs 3 fields");
    }
    LabelRow row;
    row.file = line.substr(0, c1);
    try {
      std::size_t used = 0;
      const std::string idx = line.substr(c1 + 1, c2 - c1 - 1);
      row.epoch_index = std::stoi(idx, &used);
      if (used != idx.size() || row.epoch_index < 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse,
                  "labels: bad epoch_index on line " + std::to_string(line_no));
    }
    auto label = ParseClassName(line.substr(c2 + 1));
    if (!label) {
      throw Error(ErrorCode::kParse,
                  "labels: unknown class on line " + std::to_string(line_no));
    }
    row.label = *label;
    rows.push_back(row);
  }
  return rows;
}

std::vector<Epoch> LoadEpochs(const std::string& dir,
                              std::optional<int> length_s) {
  const std::string labels_path = dir + "/labels.csv";
  if (!std::filesystem::is_regular_file(labels_path)) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset: no labels.csv in '" + dir + "'");
  }
  const std::vector<LabelRow> rows = ParseLabelCsv(ReadText(labels_path));
  if (rows.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "dataset: '" + dir + "' is empty");
  }
  if (!length_s) {
    const std::string meta_path = dir + "/dataset.json";
    if (!std::filesystem::is_regular_file(meta_path)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "dataset: epoch length unknown (no dataset.json)");
    }
    try {
      length_s = nlohmann::json::parse(ReadText(meta_path))
                     .at("epoch_length_s")
                     .get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, std::string("dataset.json: ") + e.what());
    }
  }

  std::map<std::string, std::vector<Epoch>> cache;
  std::vector<Epoch> out;
  out.reserve(rows.size());
  for (const LabelRow& row : rows) {
    auto it = cache.find(row.file);
    if (it == cache.end()) {
      const edf::EdfFile file = edf::ReadFile(dir + "/" + row.file);
      const edf::SignalTrace trace = edf::ToTrace(file, 0);
      it = cache.emplace(row.file, pipeline::Assemble(trace.samples, *length_s,
                                            trace.rate_hz)).first;
    }
    if (row.epoch_index >= static_cast<int>(it->second.size())) {
      throw Error(ErrorCode::kOutOfRange,
                  "dataset: " + row.file + " has no epoch " +
                      std::to_string(row.epoch_index));
    }
    Epoch e = it->second[row.epoch_index];
    e.label = row.label;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<gbt::LabeledVector> ExtractAll(const std::vector<Epoch>& epochs,
                                           const features::FeatureSchema& schema) {
  std::vector<gbt::LabeledVector> out;
  out.reserve(epochs.size());
  for (const Epoch& e : epochs) {
    if (!e.label) {
      throw Error(ErrorCode::kInvalidArgument, "dataset: unlabeled epoch");
    }
    out.push_back({features::PreprocessAndExtract(e, schema), *e.label});
  }
  return out;
}

}  // namespace eegpi::dataset
