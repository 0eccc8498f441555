// Copyright 2026 The feinduce Authors.
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

#include "feinduce/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "feinduce/errors.hpp"

namespace feinduce {

using json = nlohmann::json;

void warn(const std::string &message) {
  std::cerr << "WARNING: " << message << "\n";
}

const char *PositionName(Position position) {
  return position == Position::kBefore ? "before" : "after";
}

Position ParsePosition(const std::string &name) {
  if (name == "before") return Position::kBefore;
  if (name == "after") return Position::kAfter;
  throw DataError("position must be \"before\" or \"after\", got \"" + name +
                  "\"");
}

Dataset::Dataset(std::vector<ArgumentInstance> instances,
                 std::size_t embedding_dim)
    : instances_(std::move(instances)), embedding_dim_(embedding_dim) {
  if (!instances_.empty() && embedding_dim_ == 0)
    throw DataError("embedding dimension must be positive");
  std::unordered_set<std::string> seen;
  seen.reserve(instances_.size());
  for (const ArgumentInstance &inst : instances_) {
    if (!seen.insert(inst.instance_id).second)
      throw DataError("duplicate instance_id \"" + inst.instance_id + "\"");
    if (inst.embedding.size() != embedding_dim_)
      throw DataError("instance \"" + inst.instance_id + "\" has a " +
                      std::to_string(inst.embedding.size()) +
                      "-dim embedding, expected " +
                      std::to_string(embedding_dim_));
    if (inst.dep_label.empty())
      throw DataError("instance \"" + inst.instance_id +
                      "\" has an empty dep_label");
  }
}

std::vector<std::string> Dataset::frames() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const ArgumentInstance &inst : instances_)
    if (seen.insert(inst.frame).second) out.push_back(inst.frame);
  return out;
}

Dataset Dataset::Subset(const std::set<std::string> &frames) const {
  std::vector<ArgumentInstance> kept;
  for (const ArgumentInstance &inst : instances_)
    if (frames.count(inst.frame)) kept.push_back(inst);
  return Dataset(std::move(kept), embedding_dim_);
}

std::set<std::string> FoldSplit::FramesIn(int fold) const {
  std::set<std::string> out;
  for (const auto &[frame, f] : fold_of_frame)
    if (f == fold) out.insert(frame);
  return out;
}

Dataset FoldSplit::Fold(const Dataset &dataset, int fold) const {
  return dataset.Subset(FramesIn(fold));
}

namespace {

const char *const kFields[] = {"instance_id", "sentence_id", "frame",
                               "fe_label",    "verb_lemma",  "position",
                               "dep_label",   "embedding"};

std::string RequireString(const json &record, const char *key, long line) {
  auto it = record.find(key);
  if (it == record.end())
    throw DataError(std::string("missing field \"") + key + "\"", line);
  if (!it->is_string())
    throw DataError(std::string("field \"") + key + "\" must be a string",
                    line);
  return it->get<std::string>();
}

ArgumentInstance ParseRecord(const json &record, long line,
                             std::set<std::string> *unknown) {
  if (!record.is_object()) throw DataError("record is not an object", line);
  ArgumentInstance inst;
  inst.instance_id = RequireString(record, "instance_id", line);
  inst.sentence_id = RequireString(record, "sentence_id", line);
  inst.frame = RequireString(record, "frame", line);
  inst.fe_label = RequireString(record, "fe_label", line);
  inst.verb_lemma = RequireString(record, "verb_lemma", line);
  inst.dep_label = RequireString(record, "dep_label", line);
  if (inst.dep_label.empty()) throw DataError("empty dep_label", line);
  try {
    inst.position = ParsePosition(RequireString(record, "position", line));
  } catch (const DataError &e) {
    if (e.line() != 0) throw;
    throw DataError(e.what(), line);
  }
  auto emb = record.find("embedding");
  if (emb == record.end() || !emb->is_array())
    throw DataError("field \"embedding\" must be an array", line);
  inst.embedding.reserve(emb->size());
  for (const json &v : *emb) {
    if (!v.is_number())
      throw DataError("embedding entries must be numbers", line);
    inst.embedding.push_back(v.get<float>());
  }
  for (auto it = record.begin(); it != record.end(); ++it) {
    if (std::find(std::begin(kFields), std::end(kFields), it.key()) ==
        std::end(kFields))
      unknown->insert(it.key());
  }
  return inst;
}

}  // namespace

Dataset ReadCorpus(std::istream &in) {
  std::vector<ArgumentInstance> instances;
  std::unordered_set<std::string> ids;
  std::set<std::string> unknown;
  std::size_t dim = 0;
  std::string text;
  long line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(text);
    } catch (const json::exception &e) {
      throw DataError(std::string("malformed JSON: ") + e.what(), line);
    }
    ArgumentInstance inst = ParseRecord(record, line, &unknown);
    if (instances.empty()) {
      dim = inst.embedding.size();
      if (dim == 0) throw DataError("empty embedding", line);
    } else if (inst.embedding.size() != dim) {
      throw DataError("embedding has dimension " +
                          std::to_string(inst.embedding.size()) +
                          ", expected " + std::to_string(dim),
                      line);
    }
    if (!ids.insert(inst.instance_id).second)
      throw DataError("duplicate instance_id \"" + inst.instance_id + "\"",
                      line);
    instances.push_back(std::move(inst));
  }
  for (const std::string &key : unknown)
    warn("ignoring unknown field \"" + key + "\"");
  return Dataset(std::move(instances), dim);
}

Dataset LoadCorpus(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus " + path.string());
  return ReadCorpus(in);
}

void WriteCorpus(const Dataset &dataset, std::ostream &out) {
  for (const ArgumentInstance &inst : dataset.instances()) {
    // ordered_json keeps the documented field order.
    nlohmann::ordered_json record;
    record["instance_id"] = inst.instance_id;
    record["sentence_id"] = inst.sentence_id;
    record["frame"] = inst.frame;
    record["fe_label"] = inst.fe_label;
    record["verb_lemma"] = inst.verb_lemma;
    record["position"] = PositionName(inst.position);
    record["dep_label"] = inst.dep_label;
    record["embedding"] = inst.embedding;
    out << record.dump() << "\n";
  }
}

void SaveCorpus(const Dataset &dataset, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  WriteCorpus(dataset, out);
}

FoldSplit SplitFolds(const Dataset &dataset, int n_folds,
                     std::uint64_t seed) {
  if (n_folds < 2) throw DataError("need at least 2 folds");
  std::map<std::string, std::size_t> counts;
  for (const ArgumentInstance &inst : dataset.instances())
    ++counts[inst.frame];
  if (counts.size() < static_cast<std::size_t>(n_folds))
    throw DataError("cannot split " + std::to_string(counts.size()) +
                    " frames into " + std::to_string(n_folds) + " folds");

  std::vector<std::pair<std::string, std::size_t>> order(counts.begin(),
                                                         counts.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto &a, const auto &b) {
                     return a.second > b.second;  // names already sorted
                   });
  std::mt19937_64 rng(seed);
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    while (hi < order.size() && order[hi].second == order[lo].second) ++hi;
    std::shuffle(order.begin() + lo, order.begin() + hi, rng);
    lo = hi;
  }

  FoldSplit split;
  split.n_folds = n_folds;
  std::vector<std::size_t> load(n_folds, 0);
  for (const auto &[frame, count] : order) {
    int lightest = static_cast<int>(
        std::min_element(load.begin(), load.end()) - load.begin());
    split.fold_of_frame[frame] = lightest;
    load[lightest] += count;
  }
  return split;
}

DatasetStats ComputeStats(const Dataset &dataset) {
  std::set<std::string> frames, sentences;
  std::set<std::pair<std::string, std::string>> fes;
  for (const ArgumentInstance &inst : dataset.instances()) {
    frames.insert(inst.frame);
    sentences.insert(inst.sentence_id);
    fes.emplace(inst.frame, inst.fe_label);
  }
  return {frames.size(), fes.size(), sentences.size(), dataset.size()};
}

Dataset NormalizeEmbeddings(const Dataset &dataset) {
  std::vector<ArgumentInstance> out = dataset.instances();
  for (ArgumentInstance &inst : out) {
    double sq = 0;
    for (float v : inst.embedding) sq += static_cast<double>(v) * v;
    double norm = std::sqrt(sq);
    if (!(norm > 0) || !std::isfinite(norm))
      throw DataError("instance \"" + inst.instance_id +
                      "\" has a zero or non-finite embedding norm");
    // Already unit norm to float precision; rescaling would only jitter
    // the last bit.
    if (std::abs(norm - 1.0) <= 1e-7) continue;
    for (float &v : inst.embedding)
      v = static_cast<float>(static_cast<double>(v) / norm);
  }
  return Dataset(std::move(out), dataset.embedding_dim());
}

}  // namespace feinduce
