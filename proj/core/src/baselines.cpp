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

#include "feinduce/baselines.hpp"

#include <map>
#include <set>

namespace feinduce {

FEClustering BooleanCluster(const Dataset &test) {
  FEClustering out;
  for (const ArgumentInstance &inst : test.instances())
    out.entries.push_back(
        {inst.instance_id,
         {inst.frame, inst.position == Position::kBefore ? 0 : 1}});
  return out;
}

FEClustering DependencyCluster(const Dataset &test) {
  std::set<std::string> labels;
  for (const ArgumentInstance &inst : test.instances())
    labels.insert(inst.dep_label);
  std::map<std::string, int> role;
  for (const std::string &label : labels)
    role.emplace(label, static_cast<int>(role.size()));
  FEClustering out;
  for (const ArgumentInstance &inst : test.instances())
    out.entries.push_back(
        {inst.instance_id, {inst.frame, role.at(inst.dep_label)}});
  return out;
}

}  // namespace feinduce
