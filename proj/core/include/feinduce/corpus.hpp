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

// Argument-instance corpus: the interchange data model, JSON-lines I/O,
// frame-disjoint fold splitting, statistics and a synthetic generator.

#ifndef FEINDUCE_CORPUS_HPP_
#define FEINDUCE_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace feinduce {

enum class Position { kBefore, kAfter };

const char *PositionName(Position position);
Position ParsePosition(const std::string &name);

// One annotated argument span of a frame-evoking verb.
struct ArgumentInstance {
  std::string instance_id;
  std::string sentence_id;
  std::string frame;
  std::string fe_label;  // meaningful only together with `frame`
  std::string verb_lemma;
  Position position = Position::kAfter;
  std::string dep_label;
  std::vector<float> embedding;

  bool operator==(const ArgumentInstance &) const = default;
};

// Validated collection of instances sharing one embedding dimension.
// Instance order is preserved and is significant for determinism.
class Dataset {
 public:
  Dataset() = default;

  // Throws DataError on duplicate ids, dimension mismatch, or an empty
  // dep_label. An empty instance list is allowed.
  Dataset(std::vector<ArgumentInstance> instances, std::size_t embedding_dim);

  const std::vector<ArgumentInstance> &instances() const { return instances_; }
  const ArgumentInstance &operator[](std::size_t i) const {
    return instances_[i];
  }
  std::size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }
  std::size_t embedding_dim() const { return embedding_dim_; }

  // Distinct frame names in first-appearance order.
  std::vector<std::string> frames() const;

  // Instances whose frame is in `frames`, original order kept.
  Dataset Subset(const std::set<std::string> &frames) const;

  bool operator==(const Dataset &) const = default;

 private:
  std::vector<ArgumentInstance> instances_;
  std::size_t embedding_dim_ = 0;
};

// Frame-disjoint assignment of frames to folds.
struct FoldSplit {
  int n_folds = 0;
  std::map<std::string, int> fold_of_frame;

  std::set<std::string> FramesIn(int fold) const;
  Dataset Fold(const Dataset &dataset, int fold) const;
};

struct DatasetStats {
  std::size_t n_frames = 0;
  std::size_t n_fes = 0;        // distinct (frame, fe_label) pairs
  std::size_t n_examples = 0;   // distinct sentence_id
  std::size_t n_instances = 0;

  bool operator==(const DatasetStats &) const = default;
};

struct SynthConfig {
  std::size_t n_frames = 20;
  std::size_t fes_per_frame = 3;
  std::size_t instances_per_fe = 30;
  std::size_t dim = 32;
  double noise_scale = 0.35;
  double shared_role_fraction = 0.3;
};

// Parses the JSON-lines interchange format. Unknown fields produce a
// warning; malformed lines throw DataError carrying the line number.
Dataset ReadCorpus(std::istream &in);
Dataset LoadCorpus(const std::filesystem::path &path);

// Writes one record per line with a fixed field order. Floats are printed
// in shortest round-trip form, so Load(Save(d)) == d for finite values.
void WriteCorpus(const Dataset &dataset, std::ostream &out);
void SaveCorpus(const Dataset &dataset, const std::filesystem::path &path);

// Greedy largest-frame-first bin packing into `n_folds` folds. Frames are
// ordered by instance count (descending) then name; runs of equal count
// are shuffled with `seed`; each frame goes to the currently lightest
// fold (lowest index on ties).
FoldSplit SplitFolds(const Dataset &dataset, int n_folds, std::uint64_t seed);

DatasetStats ComputeStats(const Dataset &dataset);

Dataset GenerateSynthetic(const SynthConfig &config, std::uint64_t seed);

// Scales every embedding to unit Euclidean norm. Throws DataError naming
// the instance when an embedding has zero norm.
Dataset NormalizeEmbeddings(const Dataset &dataset);

}  // namespace feinduce

#endif  // FEINDUCE_CORPUS_HPP_
