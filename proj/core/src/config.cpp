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

#include <charconv>
#include <fstream>
#include <functional>

#include "feinduce/errors.hpp"
#include "feinduce/experiment.hpp"

namespace feinduce {
namespace {

std::string Trim(const std::string &s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T ParseNumber(const std::string &key, const std::string &value) {
  T out{};
  const char *first = value.data();
  const char *last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw UsageError("invalid value \"" + value + "\" for " + key);
  return out;
}

double ParseReal(const std::string &key, const std::string &value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception &) {
    throw UsageError("invalid value \"" + value + "\" for " + key);
  }
}

std::vector<double> ParseRealList(const std::string &key,
                                  const std::string &value) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    out.push_back(ParseReal(key, Trim(value.substr(start, comma - start))));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> ReadKeyValueFile(
    const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (Trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path.string() + ":" + std::to_string(number) +
                       ": expected key = value");
    out[Trim(line.substr(0, eq))] = Trim(line.substr(eq + 1));
  }
  return out;
}

void ApplySettings(const std::map<std::string, std::string> &settings,
                   ExperimentConfig *config) {
  using Setter = std::function<void(const std::string &, const std::string &)>;
  ExperimentConfig &c = *config;
  const std::map<std::string, Setter> setters = {
      {"corpus", [&](auto &, auto &v) { c.corpus = v; }},
      {"method", [&](auto &, auto &v) { c.method = ParseMethod(v); }},
      {"model", [&](auto &, auto &v) { c.model = ParseModelKind(v); }},
      {"seed", [&](auto &k, auto &v) { c.seed = ParseNumber<std::uint64_t>(k, v); }},
      {"out", [&](auto &, auto &v) { c.out = v; }},
      {"margin", [&](auto &k, auto &v) { c.train.margins = ParseRealList(k, v); }},
      {"epochs", [&](auto &k, auto &v) { c.train.epochs = ParseNumber<int>(k, v); }},
      {"batch-size", [&](auto &k, auto &v) { c.train.batch_size = ParseNumber<int>(k, v); }},
      {"lr", [&](auto &k, auto &v) { c.train.learning_rate = ParseReal(k, v); }},
      {"scale", [&](auto &k, auto &v) { c.train.scale = ParseReal(k, v); }},
      {"weight-decay", [&](auto &k, auto &v) { c.train.weight_decay = ParseReal(k, v); }},
      {"init-noise", [&](auto &k, auto &v) { c.train.init_noise = ParseReal(k, v); }},
      {"folds", [&](auto &k, auto &v) { c.n_folds = ParseNumber<int>(k, v); }},
      {"max-instances", [&](auto &k, auto &v) { c.max_instances = ParseNumber<std::size_t>(k, v); }},
      {"synth.frames", [&](auto &k, auto &v) { c.synth.n_frames = ParseNumber<std::size_t>(k, v); }},
      {"synth.fes-per-frame", [&](auto &k, auto &v) { c.synth.fes_per_frame = ParseNumber<std::size_t>(k, v); }},
      {"synth.instances-per-fe", [&](auto &k, auto &v) { c.synth.instances_per_fe = ParseNumber<std::size_t>(k, v); }},
      {"synth.dim", [&](auto &k, auto &v) { c.synth.dim = ParseNumber<std::size_t>(k, v); }},
      {"synth.noise", [&](auto &k, auto &v) { c.synth.noise_scale = ParseReal(k, v); }},
      {"synth.shared-fraction", [&](auto &k, auto &v) { c.synth.shared_role_fraction = ParseReal(k, v); }},
  };
  for (const auto &[key, value] : settings) {
    auto it = setters.find(key);
    if (it == setters.end()) throw UsageError("unknown setting \"" + key + "\"");
    it->second(key, value);
  }
  if (c.n_folds < 2) throw UsageError("folds must be at least 2");
}

}  // namespace feinduce
