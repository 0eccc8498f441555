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

// Three-fold cross-validation driver, run-directory reports, embedding
// export and configuration handling behind the command-line tool.

#ifndef FEINDUCE_EXPERIMENT_HPP_
#define FEINDUCE_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "feinduce/clustering.hpp"
#include "feinduce/corpus.hpp"
#include "feinduce/evaluation.hpp"
#include "feinduce/training.hpp"

namespace feinduce {

enum class Method { kCross, kIntra };
enum class ModelKind { kVanilla, kTriplet, kArcFace, kBoolean, kDependency };

const char *MethodName(Method method);
const char *ModelKindName(ModelKind model);
Method ParseMethod(const std::string &name);        // throws UsageError
ModelKind ParseModelKind(const std::string &name);  // throws UsageError

bool IsBaseline(ModelKind model);
bool IsTrained(ModelKind model);

struct ExperimentConfig {
  std::filesystem::path corpus;  // empty: generate from `synth`
  SynthConfig synth;
  Method method = Method::kIntra;
  ModelKind model = ModelKind::kVanilla;
  // Loss and mode are derived from `model` and `method`; the remaining
  // fields are used for triplet and arcface runs only.
  TrainConfig train;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  int n_folds = 3;
  std::size_t max_instances = 30000;

  // Train config with loss, mode and seed filled in for this run.
  TrainConfig ResolvedTrainConfig() const;
};

// Name of the run-directory row: "<method>-<model>", or just the model
// for baselines, which do not depend on the clustering method.
std::string RowName(const ExperimentConfig &config);

struct FoldResult {
  int test_fold = 0;
  int dev_fold = 0;
  int train_fold = 0;
  std::vector<std::string> test_frames;
  EvalReport report;
  FEClustering clustering;
  std::optional<TrainedModel> model;
  std::size_t k_roles = 0;                        // cross-frame runs
  std::optional<ThresholdCalibration> threshold;  // intra-frame runs
};

struct CvResult {
  std::string method;
  std::string model;
  std::vector<FoldResult> folds;
  EvalReport mean;  // field-wise mean over folds
  double mean_clusters = 0;
};

// Element-wise mean of the reports; pif and bcf are the means of the
// per-fold F-scores. n_clusters is rounded.
EvalReport MeanReport(const std::vector<EvalReport> &reports,
                      double *mean_clusters = nullptr);

// For each rotation (test = f, dev = f + 1, train = f + 2 mod n_folds):
// train and select on dev (trained models), calibrate the cluster count or
// threshold on dev, cluster the test fold and evaluate it. The corpus is
// l2-normalized first. Errors are rethrown with the fold and stage named.
CvResult RunCrossValidation(const Dataset &corpus,
                            const ExperimentConfig &config);

// Loads or generates the corpus, runs cross-validation, and writes
// artifacts under config.out/RowName(config) when config.out is set.
CvResult RunCv(const ExperimentConfig &config);

void WriteRunArtifacts(const CvResult &result, const ExperimentConfig &config,
                       const std::filesystem::path &row_dir);

// Aggregates every row directory under `run_dir` from its per-fold
// eval.json files, writes run_dir/report.tsv and returns a human-readable
// table. Throws DataError when a fold output is missing.
std::string Report(const std::filesystem::path &run_dir);

// TSV with columns instance_id, frame, fe_label, e0..e{d-1}.
void ExportViz(const Dataset &dataset, const MetricHead &head,
               const std::filesystem::path &path);

struct VizTable {
  std::vector<std::string> instance_ids;
  std::vector<std::string> frames;
  std::vector<std::string> fe_labels;
  Matrix embeddings;
};
VizTable LoadViz(const std::filesystem::path &path);

// Flat "key = value" file; '#' starts a comment. Throws UsageError on a
// line without '='.
std::map<std::string, std::string> ReadKeyValueFile(
    const std::filesystem::path &path);

// Applies recognised keys (the long CLI flag names without dashes, plus
// synth.* keys) to `config`. Throws UsageError on unknown keys or bad
// values.
void ApplySettings(const std::map<std::string, std::string> &settings,
                   ExperimentConfig *config);

}  // namespace feinduce

#endif  // FEINDUCE_EXPERIMENT_HPP_
