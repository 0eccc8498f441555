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

#ifndef FEINDUCE_BASELINES_HPP_
#define FEINDUCE_BASELINES_HPP_

#include "feinduce/clustering.hpp"
#include "feinduce/corpus.hpp"

namespace feinduce {

// Role = position relative to the verb (0 before, 1 after), merged with
// the gold frame.
FEClustering BooleanCluster(const Dataset &test);

// Role = dependency label of the argument head, merged with the gold
// frame. Role ids index the sorted set of labels observed in `test`.
FEClustering DependencyCluster(const Dataset &test);

}  // namespace feinduce

#endif  // FEINDUCE_BASELINES_HPP_
