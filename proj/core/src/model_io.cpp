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

// Model container: a single JSON document, format "feinduce-model",
// version 1. Matrices are stored row-major as nested arrays; doubles are
// printed in shortest round-trip form so a load/save cycle is exact.

#include <fstream>

#include <nlohmann/json.hpp>

#include "feinduce/errors.hpp"
#include "feinduce/training.hpp"

namespace feinduce {

using json = nlohmann::ordered_json;

namespace {

constexpr int kModelVersion = 1;

json MatrixToJson(const Matrix &m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix MatrixFromJson(const json &rows, Eigen::Index n_rows,
                      Eigen::Index n_cols) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n_rows)
    throw DataError("model matrix has the wrong number of rows");
  Matrix m(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const json &row = rows[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols)
      throw DataError("model matrix has the wrong number of columns");
    for (Eigen::Index j = 0; j < n_cols; ++j) m(i, j) = row[j].get<double>();
  }
  return m;
}

json ConfigToJson(const TrainConfig &c) {
  json j;
  j["loss"] = LossKindName(c.loss);
  j["mode"] = TrainModeName(c.mode);
  j["margins"] = c.MarginGrid();
  j["scale"] = c.scale;
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["learning_rate"] = c.learning_rate;
  j["weight_decay"] = c.weight_decay;
  j["init_noise"] = c.init_noise;
  j["seed"] = c.seed;
  return j;
}

TrainConfig ConfigFromJson(const json &j) {
  TrainConfig c;
  const std::string loss = j.at("loss").get<std::string>();
  if (loss == "triplet") c.loss = LossKind::kTriplet;
  else if (loss == "arcface") c.loss = LossKind::kArcFace;
  else throw DataError("unknown loss \"" + loss + "\" in model file");
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "cross") c.mode = TrainMode::kCrossFrame;
  else if (mode == "intra") c.mode = TrainMode::kIntraFrame;
  else throw DataError("unknown mode \"" + mode + "\" in model file");
  c.margins = j.at("margins").get<std::vector<double>>();
  c.scale = j.at("scale").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.weight_decay = j.at("weight_decay").get<double>();
  c.init_noise = j.at("init_noise").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

json EntryToJson(const SelectionEntry &e) {
  return json{{"margin", e.margin}, {"epoch", e.epoch}, {"score", e.score}};
}

SelectionEntry EntryFromJson(const json &j) {
  return {j.at("margin").get<double>(), j.at("epoch").get<int>(),
          j.at("score").get<double>()};
}

}  // namespace

void WriteModel(const TrainedModel &model, std::ostream &out) {
  json j;
  j["format"] = "feinduce-model";
  j["version"] = kModelVersion;
  j["d_in"] = model.head.input_dim();
  j["d_out"] = model.head.output_dim();
  j["weight"] = MatrixToJson(model.head.weight);
  j["bias"] = std::vector<double>(model.head.bias.data(),
                                  model.head.bias.data() + model.head.bias.size());
  json spaces = json::array();
  if (model.arcface) {
    for (const LabelSpace &ls : model.arcface->spaces)
      spaces.push_back(json{{"name", ls.name},
                            {"labels", ls.labels},
                            {"weights", MatrixToJson(ls.weights)}});
  }
  j["arcface"] = model.arcface ? json(std::move(spaces)) : json(nullptr);
  j["config"] = ConfigToJson(model.config);
  json report = json::array();
  for (const SelectionEntry &e : model.selection_report)
    report.push_back(EntryToJson(e));
  j["selection_report"] = std::move(report);
  j["selected"] = EntryToJson(model.selected);
  j["skipped_anchors"] = model.skipped_anchors;
  j["skipped_arcface"] = model.skipped_arcface;
  out << j.dump(1) << "\n";
}

TrainedModel ReadModel(std::istream &in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception &e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
  try {
    if (j.at("format") != "feinduce-model")
      throw DataError("not a feinduce model file");
    if (j.at("version").get<int>() != kModelVersion)
      throw DataError("unsupported model version " + j.at("version").dump());
    TrainedModel model;
    const auto d_in = j.at("d_in").get<Eigen::Index>();
    const auto d_out = j.at("d_out").get<Eigen::Index>();
    model.head.weight = MatrixFromJson(j.at("weight"), d_out, d_in);
    const auto bias = j.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(bias.size()) != d_out)
      throw DataError("model bias has the wrong size");
    model.head.bias = Eigen::Map<const Vector>(bias.data(), d_out);
    if (!j.at("arcface").is_null()) {
      ArcFaceHead arcface;
      for (const json &s : j.at("arcface")) {
        LabelSpace ls;
        ls.name = s.at("name").get<std::string>();
        ls.labels = s.at("labels").get<std::vector<std::string>>();
        ls.weights = MatrixFromJson(s.at("weights"),
                                    static_cast<Eigen::Index>(ls.labels.size()),
                                    d_out);
        arcface.spaces.push_back(std::move(ls));
      }
      model.arcface = std::move(arcface);
    }
    model.config = ConfigFromJson(j.at("config"));
    for (const json &e : j.at("selection_report"))
      model.selection_report.push_back(EntryFromJson(e));
    model.selected = EntryFromJson(j.at("selected"));
    model.skipped_anchors = j.at("skipped_anchors").get<std::size_t>();
    model.skipped_arcface = j.at("skipped_arcface").get<std::size_t>();
    return model;
  } catch (const json::exception &e) {
    throw DataError(std::string("invalid model file: ") + e.what());
  }
}

void SaveModel(const TrainedModel &model, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  WriteModel(model, out);
}

TrainedModel LoadModel(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model " + path.string());
  return ReadModel(in);
}

}  // namespace feinduce
