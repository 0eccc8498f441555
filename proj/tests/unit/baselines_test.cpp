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

#include <map>
#include <set>

#include "doctest.h"
#include "feinduce/baselines.hpp"
#include "feinduce/evaluation.hpp"
#include "fixtures.hpp"

namespace feinduce {
namespace {

std::map<std::string, FELabel> ById(const FEClustering &c) {
  std::map<std::string, FELabel> out;
  for (const auto &e : c.entries) out[e.instance_id] = e.label;
  return out;
}

TEST_CASE("boolean baseline on the donate sentence") {
  const auto labels = ById(BooleanCluster(testing::GivingExamples()));
  // "I" before the verb; "the money" and "to charity" after it.
  CHECK(labels.at("s2_a0").frame == "Giving");
  CHECK(labels.at("s2_a0") != labels.at("s2_a1"));
  CHECK(labels.at("s2_a1") == labels.at("s2_a2"));
  CHECK(labels.at("s2_a0") == labels.at("s3_a0"));
}

TEST_CASE("dependency baseline on the donate sentence") {
  const auto labels = ById(DependencyCluster(testing::GivingExamples()));
  // nsubj, obj and obl fall in three clusters within Giving.
  const std::set<FELabel> s2 = {labels.at("s2_a0"), labels.at("s2_a1"), labels.at("s2_a2")};
  CHECK(s2.size() == 3);
  CHECK(labels.at("s2_a0") == labels.at("s3_a0"));  // both nsubj
  CHECK(labels.at("s2_a1") == labels.at("s3_a2"));  // both obj
  CHECK(labels.at("s2_a2") != labels.at("s3_a1"));  // obl vs iobj
}

TEST_CASE("baselines merge roles with the gold frame") {
  const Dataset d = testing::RandomDataset(3, 2, 6, 2, 1);
  const FEClustering b = BooleanCluster(d);
  CHECK(b.CountClusters() <= 6);
  std::set<int> roles;
  for (const auto &e : b.entries) roles.insert(e.label.role);
  CHECK(roles.size() <= 2);
  const FEClustering dep = DependencyCluster(d);
  std::set<std::pair<std::string, std::string>> expected;
  for (const auto &inst : d.instances()) expected.insert({inst.frame, inst.dep_label});
  CHECK(dep.CountClusters() == expected.size());
  CHECK(dep.entries.size() == d.size());
  CHECK_NOTHROW(Evaluate(dep, GoldLabeling::FromDataset(d)));
}

TEST_CASE("a frame with only post-verbal arguments forms one boolean cluster") {
  std::vector<ArgumentInstance> v;
  for (int i = 0; i < 4; ++i)
    v.push_back(testing::MakeInstance("x" + std::to_string(i), "s", "F", "A",
                                      Position::kAfter, "obj", {1, 0}));
  CHECK(BooleanCluster(Dataset(v, 2)).CountClusters() == 1);
}

}  // namespace
}  // namespace feinduce
