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

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "feinduce/errors.hpp"
#include "feinduce/evaluation.hpp"
#include "feinduce/experiment.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;

namespace feinduce {
namespace {

fs::path ScratchDir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("feinduce_experiment_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> Tree(const fs::path &root) {
  std::map<std::string, std::string> out;
  for (const auto &e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = Slurp(e.path());
  return out;
}

ExperimentConfig SmallConfig(ModelKind model, Method method) {
  ExperimentConfig c;
  c.synth.n_frames = 9;
  c.synth.instances_per_fe = 8;
  c.model = model;
  c.method = method;
  c.train.epochs = 2;
  c.train.margins = {0.2};
  c.seed = 3;
  return c;
}

void RunRow(const ExperimentConfig &config, const fs::path &run_dir) {
  const CvResult r = RunCv(config);
  WriteRunArtifacts(r, config, run_dir / RowName(config));
}

TEST_CASE("names and parsing") {
  CHECK(ParseMethod("cross") == Method::kCross);
  CHECK(ParseModelKind("arcface") == ModelKind::kArcFace);
  CHECK_THROWS_AS(ParseMethod("global"), UsageError);
  CHECK_THROWS_AS(ParseModelKind("bert"), UsageError);
  CHECK(RowName(SmallConfig(ModelKind::kTriplet, Method::kIntra)) == "intra-triplet");
  CHECK(RowName(SmallConfig(ModelKind::kBoolean, Method::kIntra)) == "boolean");
}

TEST_CASE("settings override defaults and reject unknown keys") {
  ExperimentConfig c;
  ApplySettings({{"model", "arcface"}, {"margin", "0.05,0.1"}, {"scale", "32"},
                 {"synth.frames", "12"}, {"epochs", "4"}},
                &c);
  CHECK(c.model == ModelKind::kArcFace);
  CHECK(c.train.margins == std::vector<double>{0.05, 0.1});
  CHECK(c.train.scale == 32);
  CHECK(c.synth.n_frames == 12);
  CHECK(c.train.epochs == 4);
  CHECK(c.method == Method::kIntra);
  CHECK_THROWS_AS(ApplySettings({{"colour", "red"}}, &c), UsageError);
  CHECK_THROWS_AS(ApplySettings({{"epochs", "many"}}, &c), UsageError);
  const TrainConfig tc = c.ResolvedTrainConfig();
  CHECK(tc.loss == LossKind::kArcFace);
  CHECK(tc.mode == TrainMode::kIntraFrame);
}

TEST_CASE("key-value files") {
  const fs::path dir = ScratchDir("kv");
  std::ofstream(dir / "run.cfg") << "# comment\nmodel = triplet\n\n  seed=5 \n";
  const auto kv = ReadKeyValueFile(dir / "run.cfg");
  CHECK(kv.at("model") == "triplet");
  CHECK(kv.at("seed") == "5");
  std::ofstream(dir / "bad.cfg") << "model triplet\n";
  CHECK_THROWS_AS(ReadKeyValueFile(dir / "bad.cfg"), UsageError);
}

TEST_CASE("folds test disjoint frame sets") {
  const CvResult r = RunCv(SmallConfig(ModelKind::kVanilla, Method::kIntra));
  REQUIRE(r.folds.size() == 3);
  std::set<std::string> seen;
  for (const FoldResult &f : r.folds)
    for (const std::string &frame : f.test_frames) CHECK(seen.insert(frame).second);
  CHECK(seen.size() == 9);
}

TEST_CASE("baselines finish quickly on the default corpus") {
  ExperimentConfig c;
  c.model = ModelKind::kDependency;
  const CvResult r = RunCv(c);
  CHECK(r.mean.bcf > 0);
  CHECK(r.folds.size() == 3);
}

TEST_CASE("runs and reports are byte-identical when repeated") {
  const fs::path a = ScratchDir("a"), b = ScratchDir("b");
  for (const fs::path &dir : {a, b}) {
    RunRow(SmallConfig(ModelKind::kBoolean, Method::kIntra), dir);
    RunRow(SmallConfig(ModelKind::kTriplet, Method::kCross), dir);
    RunRow(SmallConfig(ModelKind::kArcFace, Method::kIntra), dir);
  }
  CHECK(Tree(a) == Tree(b));
  const std::string first = Report(a);
  const std::string tsv = Slurp(a / "report.tsv");
  CHECK(Report(a) == first);
  CHECK(Slurp(a / "report.tsv") == tsv);
  // Baselines come first, then cross-frame rows, then intra-frame rows.
  std::istringstream lines(tsv);
  std::string header, r1, r2, r3;
  std::getline(lines, header);
  std::getline(lines, r1);
  std::getline(lines, r2);
  std::getline(lines, r3);
  CHECK(header == EvalTsvHeader());
  CHECK(r1.rfind("baseline\tboolean\t", 0) == 0);
  CHECK(r2.rfind("cross\ttriplet\t", 0) == 0);
  CHECK(r3.rfind("intra\tarcface\t", 0) == 0);
  CHECK(fs::exists(a / "cross-triplet" / "fold2" / "model.json"));
  CHECK(fs::exists(a / "cross-triplet" / "fold2" / "selection.tsv"));
}

TEST_CASE("perfect predictions report 100.0") {
  const fs::path dir = ScratchDir("perfect");
  ExperimentConfig config = SmallConfig(ModelKind::kVanilla, Method::kIntra);
  CvResult result;
  result.method = "intra";
  result.model = "vanilla";
  EvalReport perfect{3, 1, 1, 1, 1, 1, 1};
  for (int f = 0; f < 3; ++f) {
    FoldResult fold;
    fold.test_fold = f;
    fold.report = perfect;
    result.folds.push_back(fold);
  }
  result.mean = MeanReport({perfect, perfect, perfect}, &result.mean_clusters);
  WriteRunArtifacts(result, config, dir / "intra-vanilla");
  Report(dir);
  CHECK(Slurp(dir / "report.tsv") == EvalTsvHeader() +
                                         "\nintra\tvanilla\t3\t100.0\t100.0\t100.0\t100.0\t100.0\t100.0\n");
  fs::remove(dir / "intra-vanilla" / "fold1" / "eval.json");
  CHECK_THROWS_AS(Report(dir), DataError);
}

TEST_CASE("errors name the fold and stage") {
  ExperimentConfig c = SmallConfig(ModelKind::kTriplet, Method::kIntra);
  c.train.batch_size = 1;
  CHECK_THROWS_AS(RunCv(c), DataError);
  // A fold whose development set gives no training signal still fails
  // with its position attached.
  std::vector<ArgumentInstance> v;
  for (int f = 0; f < 3; ++f)
    v.push_back(testing::MakeInstance("x" + std::to_string(f), "s", "F" + std::to_string(f), "A",
                                      Position::kAfter, "obj", {0, 0}));
  const Dataset zero(v, 2);
  try {
    RunCrossValidation(zero, SmallConfig(ModelKind::kVanilla, Method::kIntra));
    FAIL("expected an error");
  } catch (const DataError &e) {
    CHECK(std::string(e.what()).find("\"x") != std::string::npos);
  }
}

TEST_CASE("export-viz writes one row per instance") {
  const fs::path dir = ScratchDir("viz");
  SynthConfig sc;
  sc.n_frames = 4;
  sc.instances_per_fe = 5;
  const Dataset d = GenerateSynthetic(sc, 2);
  ExportViz(d, MetricHead::Identity(32), dir / "id.tsv");
  const VizTable identity = LoadViz(dir / "id.tsv");
  REQUIRE(identity.instance_ids.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(identity.instance_ids[i] == d[i].instance_id);
    CHECK((identity.embeddings.row(i).transpose() - ToVector(d[i].embedding)).norm() < 1e-6);
  }

  const MetricHead head = MetricHead::PerturbedIdentity(32, 0.3, 4);
  ExportViz(d, head, dir / "head.tsv");
  const VizTable t = LoadViz(dir / "head.tsv");
  std::map<std::pair<std::string, std::string>, int> classes;
  std::vector<int> labels;
  for (std::size_t i = 0; i < t.frames.size(); ++i)
    labels.push_back(classes.emplace(std::make_pair(t.frames[i], t.fe_labels[i]),
                                     static_cast<int>(classes.size())).first->second);
  const double reloaded = ComputeRankingRecall(t.embeddings, labels, t.instance_ids).score;
  CHECK(reloaded == RankingRecall(d, head));
}

}  // namespace
}  // namespace feinduce
