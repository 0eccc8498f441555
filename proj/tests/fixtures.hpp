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

// Small datasets shared by the unit tests and the acceptance binary.

#ifndef FEINDUCE_TESTS_FIXTURES_HPP_
#define FEINDUCE_TESTS_FIXTURES_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "feinduce/corpus.hpp"

namespace feinduce::testing {

inline ArgumentInstance MakeInstance(const std::string &id,
                                     const std::string &sentence,
                                     const std::string &frame,
                                     const std::string &fe,
                                     Position position,
                                     const std::string &dep,
                                     std::vector<float> embedding) {
  ArgumentInstance inst;
  inst.instance_id = id;
  inst.sentence_id = sentence;
  inst.frame = frame;
  inst.fe_label = fe;
  inst.verb_lemma = "verb";
  inst.position = position;
  inst.dep_label = dep;
  inst.embedding = std::move(embedding);
  return inst;
}

// The three Giving sentences with their eight annotated arguments.
inline Dataset GivingExamples() {
  using P = Position;
  std::vector<ArgumentInstance> v = {
      MakeInstance("s1_a0", "s1", "Giving", "Theme", P::kBefore, "nsubj:pass", {1, 0, 0, 0}),
      MakeInstance("s1_a1", "s1", "Giving", "Donor", P::kAfter, "obl:agent", {0, 1, 0, 0}),
      MakeInstance("s2_a0", "s2", "Giving", "Donor", P::kBefore, "nsubj", {0, 0.9f, 0.1f, 0}),
      MakeInstance("s2_a1", "s2", "Giving", "Theme", P::kAfter, "obj", {0.9f, 0, 0, 0.1f}),
      MakeInstance("s2_a2", "s2", "Giving", "Recipient", P::kAfter, "obl", {0, 0, 1, 0}),
      MakeInstance("s3_a0", "s3", "Giving", "Donor", P::kBefore, "nsubj", {0.1f, 0.9f, 0, 0}),
      MakeInstance("s3_a1", "s3", "Giving", "Recipient", P::kAfter, "iobj", {0, 0.1f, 0.9f, 0}),
      MakeInstance("s3_a2", "s3", "Giving", "Theme", P::kAfter, "obj", {0.9f, 0, 0.1f, 0}),
  };
  v[0].verb_lemma = "hand";
  v[1].verb_lemma = "hand";
  for (int i = 2; i < 5; ++i) v[i].verb_lemma = "donate";
  for (int i = 5; i < 8; ++i) v[i].verb_lemma = "give";
  return Dataset(std::move(v), 4);
}

// Random dataset: `frames` frames with `fes` FEs each, `per_fe` instances
// per FE, Gaussian embeddings of dimension `dim`.
inline Dataset RandomDataset(std::size_t frames, std::size_t fes,
                             std::size_t per_fe, std::size_t dim,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal;
  std::vector<ArgumentInstance> v;
  for (std::size_t f = 0; f < frames; ++f)
    for (std::size_t e = 0; e < fes; ++e)
      for (std::size_t i = 0; i < per_fe; ++i) {
        std::vector<float> emb(dim);
        for (float &x : emb) x = normal(rng);
        const std::string id = "F" + std::to_string(f) + "_E" +
                               std::to_string(e) + "_" + std::to_string(i);
        v.push_back(MakeInstance(id, id, "F" + std::to_string(f),
                                 "E" + std::to_string(e),
                                 i % 2 ? Position::kAfter : Position::kBefore,
                                 i % 3 ? "obj" : "nsubj", std::move(emb)));
      }
  return Dataset(std::move(v), dim);
}

}  // namespace feinduce::testing

#endif  // FEINDUCE_TESTS_FIXTURES_HPP_
