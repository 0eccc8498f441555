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

// feinduce: command-line front end.
//
//   feinduce synth      --out corpus.jsonl [--seed N] [synthetic options]
//   feinduce validate   --corpus corpus.jsonl
//   feinduce train      --corpus train.jsonl --dev dev.jsonl --model triplet
//                       --method intra --out model.json
//   feinduce cluster    --corpus test.jsonl --method intra --dev dev.jsonl
//                       [--model-file model.json] --out clusters.jsonl
//   feinduce evaluate   --corpus test.jsonl --clusters clusters.jsonl
//   feinduce run-cv     [--config exp.cfg] [--corpus c.jsonl] --method M
//                       --model M --out runs/
//   feinduce report     --out runs/
//   feinduce export-viz --corpus c.jsonl [--model-file model.json] --out e.tsv
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <initializer_list>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "feinduce/baselines.hpp"
#include "feinduce/clustering.hpp"
#include "feinduce/corpus.hpp"
#include "feinduce/errors.hpp"
#include "feinduce/evaluation.hpp"
#include "feinduce/experiment.hpp"
#include "feinduce/training.hpp"

namespace {

using namespace feinduce;

std::string HelpFor(const std::string &key) {
  static const std::map<std::string, std::string> help = {
      {"corpus", "Interchange file (default: synthetic corpus)"},
      {"method", "cross or intra (default intra)"},
      {"model", "vanilla, triplet, arcface, boolean or dependency"},
      {"seed", "Random seed for synthesis, fold split and training"},
      {"out", "Run directory"},
      {"margin", "Comma-separated margin grid"},
      {"epochs", "Training epochs (default 10)"},
      {"batch-size", "Minibatch size (default 16)"},
      {"lr", "AdamW learning rate (default 1e-3)"},
      {"scale", "ArcFace feature scale (default 16)"},
      {"weight-decay", "AdamW weight decay (default 0.01)"},
      {"init-noise", "Std of the head's identity perturbation (default 0.01)"},
      {"folds", "Number of folds (default 3)"},
      {"max-instances", "Cross-frame clustering cap before subsampling (default 30000)"},
  };
  return help.at(key);
}

// Options that may also come from a --config file. Only flags actually
// given on the command line override the file.
class Settings {
 public:
  void Add(CLI::App *app, const std::string &key, const std::string &help) {
    CLI::Option *opt = app->add_option("--" + key, values_[key], help);
    options_[key] = opt;
  }

  void Add(CLI::App *app, std::initializer_list<const char *> keys) {
    for (const char *key : keys) Add(app, key, HelpFor(key));
  }

  void AddSynth(CLI::App *app) {
    for (const auto &[flag, help] :
         std::vector<std::pair<std::string, std::string>>{
             {"frames", "Synthetic: number of frames"},
             {"fes-per-frame", "Synthetic: FEs per frame"},
             {"instances-per-fe", "Synthetic: instances per FE"},
             {"dim", "Synthetic: embedding dimension"},
             {"noise", "Synthetic: noise scale"},
             {"shared-fraction", "Synthetic: fraction of shared role prototypes"}}) {
      CLI::Option *opt = app->add_option("--" + flag, values_["synth." + flag], help);
      options_["synth." + flag] = opt;
    }
  }

  // Defaults, then the config file, then explicit flags.
  ExperimentConfig Resolve(const std::string &config_file) const {
    ExperimentConfig config;
    if (!config_file.empty()) ApplySettings(ReadKeyValueFile(config_file), &config);
    std::map<std::string, std::string> given;
    for (const auto &[key, opt] : options_)
      if (opt->count() > 0) given[key] = values_.at(key);
    ApplySettings(given, &config);
    return config;
  }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, CLI::Option *> options_;
};

MetricHead HeadFromFile(const std::string &model_file, std::size_t dim) {
  if (model_file.empty()) return MetricHead::Identity(dim);
  MetricHead head = LoadModel(model_file).head;
  if (head.input_dim() != dim)
    throw DataError("model expects " + std::to_string(head.input_dim()) +
                    "-dim input but the corpus has " + std::to_string(dim));
  return head;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Frame-element induction by metric learning and argument clustering"};
  app.require_subcommand(1);

  std::string config_file, corpus, dev, out, model_file, clusters_file;
  double threshold = 0;
  std::size_t k_roles = 0;

  // synth
  Settings synth_settings;
  CLI::App *synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--config", config_file, "Key-value config file");
  synth->add_option("--out", out, "Output interchange file")->required();
  synth_settings.Add(synth, "seed", "Random seed");
  synth_settings.AddSynth(synth);

  // validate
  CLI::App *validate = app.add_subcommand("validate", "Schema-check an interchange file");
  validate->add_option("--corpus", corpus, "Interchange file")->required();

  // train
  Settings train_settings;
  CLI::App *train = app.add_subcommand("train", "Train a metric head");
  train->add_option("--config", config_file, "Key-value config file");
  train->add_option("--corpus", corpus, "Training interchange file")->required();
  train->add_option("--dev", dev, "Development interchange file")->required();
  train->add_option("--out", out, "Output model file")->required();
  train_settings.Add(train, {"method", "model", "seed", "margin", "epochs",
                             "batch-size", "lr", "scale", "weight-decay", "init-noise"});

  // cluster
  Settings cluster_settings;
  CLI::App *cluster = app.add_subcommand("cluster", "Cluster a test corpus");
  cluster->add_option("--config", config_file, "Key-value config file");
  cluster->add_option("--corpus", corpus, "Test interchange file")->required();
  cluster->add_option("--model-file", model_file, "Trained model (default: identity head)");
  cluster->add_option("--dev", dev, "Development file for calibrating k or theta");
  cluster->add_option("--k", k_roles, "Cross-frame role cluster count");
  cluster->add_option("--threshold", threshold, "Intra-frame distance threshold");
  cluster->add_option("--out", out, "Output clustering file")->required();
  cluster_settings.Add(cluster, {"method", "model", "seed", "max-instances"});

  // evaluate
  std::string eval_method = "-", eval_model = "-";
  CLI::App *evaluate = app.add_subcommand("evaluate", "Score a clustering against gold labels");
  evaluate->add_option("--corpus", corpus, "Gold interchange file")->required();
  evaluate->add_option("--clusters", clusters_file, "Clustering file")->required();
  evaluate->add_option("--method", eval_method, "Method name for the TSV row");
  evaluate->add_option("--model", eval_model, "Model name for the TSV row");

  // run-cv
  Settings cv_settings;
  CLI::App *run_cv = app.add_subcommand("run-cv", "Three-fold cross-validation");
  run_cv->add_option("--config", config_file, "Key-value config file");
  cv_settings.Add(run_cv, {"corpus", "method", "model", "seed", "out", "margin",
                           "epochs", "batch-size", "lr", "scale", "weight-decay",
                           "init-noise", "folds", "max-instances"});
  cv_settings.AddSynth(run_cv);

  // report
  CLI::App *report = app.add_subcommand("report", "Summarize a run directory");
  report->add_option("--out", out, "Run directory")->required();

  // export-viz
  CLI::App *export_viz = app.add_subcommand("export-viz", "Export head embeddings as TSV");
  export_viz->add_option("--corpus", corpus, "Interchange file")->required();
  export_viz->add_option("--model-file", model_file, "Trained model (default: identity head)");
  export_viz->add_option("--out", out, "Output TSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*synth) {
      const ExperimentConfig config = synth_settings.Resolve(config_file);
      const Dataset data = GenerateSynthetic(config.synth, config.seed);
      SaveCorpus(data, out);
      const DatasetStats s = ComputeStats(data);
      std::cout << "frames=" << s.n_frames << " fes=" << s.n_fes
                << " examples=" << s.n_examples << " instances=" << s.n_instances
                << "\n";
    } else if (*validate) {
      const Dataset data = LoadCorpus(corpus);
      const DatasetStats s = ComputeStats(data);
      std::cout << "ok: dim=" << data.embedding_dim() << " frames=" << s.n_frames
                << " fes=" << s.n_fes << " examples=" << s.n_examples
                << " instances=" << s.n_instances << "\n";
    } else if (*train) {
      ExperimentConfig config = train_settings.Resolve(config_file);
      if (!IsTrained(config.model))
        throw UsageError("train needs --model triplet or arcface");
      const Dataset train_set = NormalizeEmbeddings(LoadCorpus(corpus));
      const Dataset dev_set = NormalizeEmbeddings(LoadCorpus(dev));
      const TrainedModel model = Train(train_set, dev_set, config.ResolvedTrainConfig());
      SaveModel(model, out);
      std::cout << "selected margin=" << model.selected.margin
                << " epoch=" << model.selected.epoch
                << " dev_ranking_recall=" << model.selected.score << "\n";
    } else if (*cluster) {
      const ExperimentConfig config = cluster_settings.Resolve(config_file);
      const Dataset test = NormalizeEmbeddings(LoadCorpus(corpus));
      const MetricHead head = HeadFromFile(model_file, test.embedding_dim());
      FEClustering result;
      if (config.model == ModelKind::kBoolean) {
        result = BooleanCluster(test);
      } else if (config.model == ModelKind::kDependency) {
        result = DependencyCluster(test);
      } else if (config.method == Method::kCross) {
        std::size_t k = k_roles;
        if (k == 0) {
          if (dev.empty()) throw UsageError("cross-frame clustering needs --k or --dev");
          k = RoleClusterCount(ComputeStats(LoadCorpus(dev)));
        }
        ClusterOptions options;
        options.max_instances = config.max_instances;
        options.seed = config.seed;
        result = CrossFrameCluster(test, head, k, options);
        std::cerr << "k_roles=" << k << "\n";
      } else {
        double theta = threshold;
        if (theta <= 0) {
          if (dev.empty()) throw UsageError("intra-frame clustering needs --threshold or --dev");
          theta = CalibrateThreshold(NormalizeEmbeddings(LoadCorpus(dev)), head).theta;
        }
        result = IntraFrameCluster(test, head, theta);
        std::cerr << "theta=" << theta << "\n";
      }
      SaveClustering(result, out);
    } else if (*evaluate) {
      const Dataset gold = LoadCorpus(corpus);
      const FEClustering predicted = LoadClustering(clusters_file);
      const EvalReport r = Evaluate(predicted, GoldLabeling::FromDataset(gold));
      std::cout << EvalTsvHeader() << "\n"
                << EvalTsvRow(eval_method, eval_model,
                              static_cast<double>(r.n_clusters), r)
                << "\n";
    } else if (*run_cv) {
      const ExperimentConfig config = cv_settings.Resolve(config_file);
      if (config.out.empty()) throw UsageError("run-cv needs --out");
      const CvResult result = RunCv(config);
      std::cout << EvalTsvHeader() << "\n";
      for (const FoldResult &fold : result.folds)
        std::cout << EvalTsvRow(result.method,
                                result.model + "[fold" + std::to_string(fold.test_fold) + "]",
                                static_cast<double>(fold.report.n_clusters), fold.report)
                  << "\n";
      std::cout << EvalTsvRow(result.method, result.model, result.mean_clusters,
                              result.mean)
                << "\n";
    } else if (*report) {
      std::cout << Report(out);
    } else if (*export_viz) {
      const Dataset data = NormalizeEmbeddings(LoadCorpus(corpus));
      ExportViz(data, HeadFromFile(model_file, data.embedding_dim()), out);
    }
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError &e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error &e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
