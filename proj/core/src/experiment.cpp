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

#include "feinduce/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "feinduce/baselines.hpp"
#include "feinduce/errors.hpp"

namespace feinduce {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const char *MethodName(Method method) {
  return method == Method::kCross ? "cross" : "intra";
}

const char *ModelKindName(ModelKind model) {
  switch (model) {
    case ModelKind::kVanilla: return "vanilla";
    case ModelKind::kTriplet: return "triplet";
    case ModelKind::kArcFace: return "arcface";
    case ModelKind::kBoolean: return "boolean";
    case ModelKind::kDependency: return "dependency";
  }
  return "?";
}

Method ParseMethod(const std::string &name) {
  if (name == "cross") return Method::kCross;
  if (name == "intra") return Method::kIntra;
  throw UsageError("method must be cross or intra, got \"" + name + "\"");
}

ModelKind ParseModelKind(const std::string &name) {
  for (ModelKind m : {ModelKind::kVanilla, ModelKind::kTriplet,
                      ModelKind::kArcFace, ModelKind::kBoolean,
                      ModelKind::kDependency})
    if (name == ModelKindName(m)) return m;
  throw UsageError("model must be one of vanilla, triplet, arcface, boolean, "
                   "dependency; got \"" + name + "\"");
}

bool IsBaseline(ModelKind model) {
  return model == ModelKind::kBoolean || model == ModelKind::kDependency;
}

bool IsTrained(ModelKind model) {
  return model == ModelKind::kTriplet || model == ModelKind::kArcFace;
}

TrainConfig ExperimentConfig::ResolvedTrainConfig() const {
  TrainConfig c = train;
  c.loss = model == ModelKind::kArcFace ? LossKind::kArcFace : LossKind::kTriplet;
  c.mode = method == Method::kCross ? TrainMode::kCrossFrame
                                    : TrainMode::kIntraFrame;
  c.seed = seed;
  return c;
}

std::string RowName(const ExperimentConfig &config) {
  if (IsBaseline(config.model)) return ModelKindName(config.model);
  return std::string(MethodName(config.method)) + "-" +
         ModelKindName(config.model);
}

EvalReport MeanReport(const std::vector<EvalReport> &reports,
                      double *mean_clusters) {
  EvalReport mean;
  if (reports.empty()) return mean;
  double clusters = 0;
  for (const EvalReport &r : reports) {
    clusters += static_cast<double>(r.n_clusters);
    mean.pu += r.pu;
    mean.ipu += r.ipu;
    mean.pif += r.pif;
    mean.bcp += r.bcp;
    mean.bcr += r.bcr;
    mean.bcf += r.bcf;
  }
  const double n = static_cast<double>(reports.size());
  clusters /= n;
  mean.pu /= n;
  mean.ipu /= n;
  mean.pif /= n;
  mean.bcp /= n;
  mean.bcr /= n;
  mean.bcf /= n;
  mean.n_clusters = static_cast<std::size_t>(std::llround(clusters));
  if (mean_clusters) *mean_clusters = clusters;
  return mean;
}

namespace {

// Runs `fn`, prefixing any error with the fold and stage while keeping
// its type (the CLI maps types to exit codes).
template <typename Fn>
auto Staged(int fold, const char *stage, Fn &&fn) -> decltype(fn()) {
  const std::string where =
      "fold " + std::to_string(fold) + ", " + stage + ": ";
  try {
    return fn();
  } catch (const UsageError &e) {
    throw UsageError(where + e.what());
  } catch (const NumericalError &e) {
    throw NumericalError(where + e.what());
  } catch (const DataError &e) {
    throw DataError(where + e.what());
  }
}

}  // namespace

CvResult RunCrossValidation(const Dataset &corpus,
                            const ExperimentConfig &config) {
  const Dataset data = NormalizeEmbeddings(corpus);
  const FoldSplit split = SplitFolds(data, config.n_folds, config.seed);
  const TrainConfig train_config = config.ResolvedTrainConfig();
  if (IsTrained(config.model)) train_config.Validate();

  CvResult result;
  result.method = IsBaseline(config.model) ? "baseline" : MethodName(config.method);
  result.model = ModelKindName(config.model);

  const int n = config.n_folds;
  std::vector<EvalReport> reports;
  for (int f = 0; f < n; ++f) {
    FoldResult fold;
    fold.test_fold = f;
    fold.dev_fold = (f + 1) % n;
    fold.train_fold = (f + 2) % n;
    std::set<std::string> train_frames;
    for (int g = 0; g < n; ++g)
      if (g != fold.test_fold && g != fold.dev_fold)
        for (const std::string &frame : split.FramesIn(g))
          train_frames.insert(frame);
    const Dataset test = split.Fold(data, fold.test_fold);
    const Dataset dev = split.Fold(data, fold.dev_fold);
    const Dataset train = data.Subset(train_frames);
    for (const std::string &frame : split.FramesIn(fold.test_fold))
      fold.test_frames.push_back(frame);

    if (config.model == ModelKind::kBoolean) {
      fold.clustering = BooleanCluster(test);
    } else if (config.model == ModelKind::kDependency) {
      fold.clustering = DependencyCluster(test);
    } else {
      MetricHead head = MetricHead::Identity(data.embedding_dim());
      if (IsTrained(config.model)) {
        fold.model = Staged(f, "training",
                            [&] { return Train(train, dev, train_config); });
        head = fold.model->head;
      }
      if (config.method == Method::kCross) {
        fold.k_roles = Staged(f, "cluster-count calibration", [&] {
          return RoleClusterCount(ComputeStats(dev));
        });
        ClusterOptions options;
        options.max_instances = config.max_instances;
        options.seed = config.seed;
        fold.clustering = Staged(f, "clustering", [&] {
          return CrossFrameCluster(test, head, fold.k_roles, options);
        });
      } else {
        fold.threshold = Staged(f, "threshold calibration",
                                [&] { return CalibrateThreshold(dev, head); });
        fold.clustering = Staged(f, "clustering", [&] {
          return IntraFrameCluster(test, head, fold.threshold->theta);
        });
      }
    }
    fold.report = Staged(f, "evaluation", [&] {
      return Evaluate(fold.clustering, GoldLabeling::FromDataset(test));
    });
    reports.push_back(fold.report);
    result.folds.push_back(std::move(fold));
  }
  result.mean = MeanReport(reports, &result.mean_clusters);
  return result;
}

namespace {

json ReportToJson(const EvalReport &r) {
  return json{{"n_clusters", r.n_clusters}, {"pu", r.pu},   {"ipu", r.ipu},
              {"pif", r.pif},               {"bcp", r.bcp}, {"bcr", r.bcr},
              {"bcf", r.bcf}};
}

EvalReport ReportFromJson(const json &j) {
  EvalReport r;
  r.n_clusters = j.at("n_clusters").get<std::size_t>();
  r.pu = j.at("pu").get<double>();
  r.ipu = j.at("ipu").get<double>();
  r.pif = j.at("pif").get<double>();
  r.bcp = j.at("bcp").get<double>();
  r.bcr = j.at("bcr").get<double>();
  r.bcf = j.at("bcf").get<double>();
  return r;
}

std::string FormatDouble(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string JoinMargins(const std::vector<double> &margins) {
  std::string out;
  for (double m : margins) {
    if (!out.empty()) out += ",";
    out += FormatDouble(m);
  }
  return out;
}

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

}  // namespace

void WriteRunArtifacts(const CvResult &result, const ExperimentConfig &config,
                       const fs::path &row_dir) {
  fs::create_directories(row_dir);
  const TrainConfig tc = config.ResolvedTrainConfig();
  std::ostringstream cfg;
  cfg << "corpus = " << (config.corpus.empty() ? "<synthetic>" : config.corpus.string()) << "\n"
      << "method = " << MethodName(config.method) << "\n"
      << "model = " << ModelKindName(config.model) << "\n"
      << "seed = " << config.seed << "\n"
      << "folds = " << config.n_folds << "\n"
      << "max-instances = " << config.max_instances << "\n";
  if (config.corpus.empty())
    cfg << "synth.frames = " << config.synth.n_frames << "\n"
        << "synth.fes-per-frame = " << config.synth.fes_per_frame << "\n"
        << "synth.instances-per-fe = " << config.synth.instances_per_fe << "\n"
        << "synth.dim = " << config.synth.dim << "\n"
        << "synth.noise = " << FormatDouble(config.synth.noise_scale) << "\n"
        << "synth.shared-fraction = " << FormatDouble(config.synth.shared_role_fraction) << "\n";
  if (IsTrained(config.model))
    cfg << "margin = " << JoinMargins(tc.MarginGrid()) << "\n"
        << "epochs = " << tc.epochs << "\n"
        << "batch-size = " << tc.batch_size << "\n"
        << "lr = " << FormatDouble(tc.learning_rate) << "\n"
        << "weight-decay = " << FormatDouble(tc.weight_decay) << "\n"
        << "scale = " << FormatDouble(tc.scale) << "\n"
        << "init-noise = " << FormatDouble(tc.init_noise) << "\n";
  WriteText(row_dir / "config.txt", cfg.str());

  for (const FoldResult &fold : result.folds) {
    const fs::path dir = row_dir / ("fold" + std::to_string(fold.test_fold));
    fs::create_directories(dir);
    SaveClustering(fold.clustering, dir / "clusters.jsonl");
    json j;
    j["method"] = result.method;
    j["model"] = result.model;
    j["n_folds"] = config.n_folds;
    j["test_fold"] = fold.test_fold;
    j["dev_fold"] = fold.dev_fold;
    j["train_fold"] = fold.train_fold;
    j["test_frames"] = fold.test_frames;
    j["report"] = ReportToJson(fold.report);
    if (fold.k_roles) j["k_roles"] = fold.k_roles;
    if (fold.threshold)
      j["threshold"] = json{{"theta", fold.threshold->theta},
                            {"mean_clusters", fold.threshold->mean_clusters},
                            {"target", fold.threshold->target}};
    if (fold.model)
      j["selected"] = json{{"margin", fold.model->selected.margin},
                           {"epoch", fold.model->selected.epoch},
                           {"score", fold.model->selected.score}};
    WriteText(dir / "eval.json", j.dump(1) + "\n");
    WriteText(dir / "eval.tsv",
              EvalTsvHeader() + "\n" +
                  EvalTsvRow(result.method, result.model,
                             static_cast<double>(fold.report.n_clusters),
                             fold.report) + "\n");
    if (fold.model) {
      SaveModel(*fold.model, dir / "model.json");
      std::ostringstream sel;
      sel << "margin\tepoch\tranking_recall\n";
      for (const SelectionEntry &e : fold.model->selection_report)
        sel << FormatDouble(e.margin) << "\t" << e.epoch << "\t"
            << FormatDouble(e.score) << "\n";
      WriteText(dir / "selection.tsv", sel.str());
    }
  }
  WriteText(row_dir / "summary.tsv",
            EvalTsvHeader() + "\n" +
                EvalTsvRow(result.method, result.model, result.mean_clusters,
                           result.mean) + "\n");
}

CvResult RunCv(const ExperimentConfig &config) {
  const Dataset corpus = config.corpus.empty()
                             ? GenerateSynthetic(config.synth, config.seed)
                             : LoadCorpus(config.corpus);
  CvResult result = RunCrossValidation(corpus, config);
  if (!config.out.empty())
    WriteRunArtifacts(result, config, config.out / RowName(config));
  return result;
}

namespace {

int RowRank(const std::string &name) {
  static const char *const kOrder[] = {
      "boolean",       "dependency",    "cross-vanilla", "cross-triplet",
      "cross-arcface", "intra-vanilla", "intra-triplet", "intra-arcface"};
  for (int i = 0; i < static_cast<int>(std::size(kOrder)); ++i)
    if (name == kOrder[i]) return i;
  return static_cast<int>(std::size(kOrder));
}

}  // namespace

std::string Report(const fs::path &run_dir) {
  if (!fs::is_directory(run_dir))
    throw DataError("run directory " + run_dir.string() + " does not exist");
  std::vector<std::string> rows;
  for (const fs::directory_entry &entry : fs::directory_iterator(run_dir))
    if (entry.is_directory() && fs::exists(entry.path() / "fold0" / "eval.json"))
      rows.push_back(entry.path().filename().string());
  if (rows.empty())
    throw DataError("no completed runs under " + run_dir.string());
  std::sort(rows.begin(), rows.end(), [](const std::string &a, const std::string &b) {
    const int ra = RowRank(a), rb = RowRank(b);
    return ra != rb ? ra < rb : a < b;
  });

  std::string tsv = EvalTsvHeader() + "\n";
  std::ostringstream table;
  table << std::left << std::setw(12) << "Method" << std::setw(12) << "Model"
        << std::right << std::setw(7) << "#C" << "  "
        << "Pu / iPu / PiF          BcP / BcR / BcF\n";
  for (const std::string &row : rows) {
    const fs::path dir = run_dir / row;
    json first;
    {
      std::ifstream in(dir / "fold0" / "eval.json");
      first = json::parse(in);
    }
    const int n_folds = first.at("n_folds").get<int>();
    std::vector<EvalReport> reports;
    for (int f = 0; f < n_folds; ++f) {
      const fs::path path = dir / ("fold" + std::to_string(f)) / "eval.json";
      if (!fs::exists(path))
        throw DataError("missing fold output " + path.string());
      std::ifstream in(path);
      try {
        reports.push_back(ReportFromJson(json::parse(in).at("report")));
      } catch (const nlohmann::json::exception &e) {
        throw DataError("invalid fold output " + path.string() + ": " + e.what());
      }
    }
    double clusters = 0;
    const EvalReport mean = MeanReport(reports, &clusters);
    const std::string method = first.at("method").get<std::string>();
    const std::string model = first.at("model").get<std::string>();
    tsv += EvalTsvRow(method, model, clusters, mean) + "\n";

    char scores[128];
    std::snprintf(scores, sizeof(scores),
                  "%5.1f / %5.1f / %5.1f    %5.1f / %5.1f / %5.1f",
                  100 * mean.pu, 100 * mean.ipu, 100 * mean.pif,
                  100 * mean.bcp, 100 * mean.bcr, 100 * mean.bcf);
    table << std::left << std::setw(12) << method << std::setw(12) << model
          << std::right << std::setw(7) << std::llround(clusters) << "  "
          << scores << "\n";
  }
  WriteText(run_dir / "report.tsv", tsv);
  return table.str();
}

void ExportViz(const Dataset &dataset, const MetricHead &head,
               const fs::path &path) {
  const Matrix embedded = head.Embed(dataset);
  std::ostringstream out;
  out << "instance_id\tframe\tfe_label";
  for (Eigen::Index j = 0; j < embedded.cols(); ++j) out << "\te" << j;
  out << "\n";
  char buf[40];
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << dataset[i].instance_id << "\t" << dataset[i].frame << "\t"
        << dataset[i].fe_label;
    for (Eigen::Index j = 0; j < embedded.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", embedded(i, j));
      out << "\t" << buf;
    }
    out << "\n";
  }
  WriteText(path, out.str());
}

VizTable LoadViz(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty export " + path.string());
  const auto columns = std::count(line.begin(), line.end(), '\t') + 1;
  const Eigen::Index dim = static_cast<Eigen::Index>(columns - 3);
  if (dim <= 0) throw DataError("export has no embedding columns");
  VizTable table;
  std::vector<std::vector<double>> rows;
  long number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (static_cast<long>(fields.size()) != columns)
      throw DataError("wrong number of columns", number);
    table.instance_ids.push_back(fields[0]);
    table.frames.push_back(fields[1]);
    table.fe_labels.push_back(fields[2]);
    std::vector<double> values;
    for (std::size_t c = 3; c < fields.size(); ++c) {
      try {
        values.push_back(std::stod(fields[c]));
      } catch (const std::exception &) {
        throw DataError("bad number \"" + fields[c] + "\"", number);
      }
    }
    rows.push_back(std::move(values));
  }
  table.embeddings.resize(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < dim; ++j) table.embeddings(i, j) = rows[i][j];
  return table;
}

}  // namespace feinduce
