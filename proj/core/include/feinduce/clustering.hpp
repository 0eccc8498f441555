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

// Group-average agglomerative clustering and the two argument clustering
// methods built on it.

#ifndef FEINDUCE_CLUSTERING_HPP_
#define FEINDUCE_CLUSTERING_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "feinduce/corpus.hpp"
#include "feinduce/metric_head.hpp"

namespace feinduce {

struct ClusterCount {
  std::size_t k = 1;
};

struct DistanceThreshold {
  double theta = 0;
};

using StopRule = std::variant<ClusterCount, DistanceThreshold>;

// Result of one agglomerative run over n points.
struct Linkage {
  // Cluster id per input point, dense from 0 in order of each cluster's
  // first member.
  std::vector<int> assignment;
  std::size_t n_clusters = 0;
  // Average-linkage distance of every merge performed, in merge order.
  std::vector<double> merge_distances;
};

// Merges the pair of clusters with the smallest average pairwise
// Euclidean distance until the stop rule fires. Ties go to the pair with
// the lexicographically smallest (first member, first member). Rows of
// `points` are the inputs.
//
// Uses a condensed pairwise distance matrix updated by the average-linkage
// recurrence and per-row nearest-neighbour caches; memory is
// LinkageMemoryBytes(n). Throws DataError on empty input or k > n.
Linkage GroupAverageCluster(const Matrix &points, const StopRule &stop);

// Bytes held by the condensed distance matrix for n points.
std::size_t LinkageMemoryBytes(std::size_t n);

// Role-cluster id per instance id.
struct RoleClustering {
  std::optional<std::string> frame;  // set for per-frame clusterings
  std::map<std::string, int> assignment;
};

struct FELabel {
  std::string frame;
  int role = 0;

  auto operator<=>(const FELabel &) const = default;
};

// Final (frame, role) label per instance, kept in input order.
struct FEClustering {
  struct Entry {
    std::string instance_id;
    FELabel label;
  };
  std::vector<Entry> entries;

  std::size_t CountClusters() const;
};

// label(i) = (gold frame of i, role of i). Throws DataError if the two
// maps do not cover the same instances.
FEClustering MergeFrameRole(const std::map<std::string, std::string> &gold_frames,
                            const RoleClustering &roles);

// round(n_fes / n_frames), half-up, at least 1.
std::size_t RoleClusterCount(const DatasetStats &dev_stats);

struct ClusterOptions {
  // Cross-frame clustering subsamples to this many instances when the
  // test set is larger; the rest join the nearest role-cluster centroid.
  std::size_t max_instances = 30000;
  std::uint64_t seed = 0;
};

FEClustering CrossFrameCluster(const Dataset &test, const MetricHead &head,
                               std::size_t k_roles,
                               const ClusterOptions &options = {});

// Throws DataError unless theta > 0.
FEClustering IntraFrameCluster(const Dataset &test, const MetricHead &head,
                               double theta);

struct ThresholdCalibration {
  double theta = 0;
  double mean_clusters = 0;  // mean clusters per frame at theta
  double target = 0;         // mean distinct FEs per frame
};

// Sweeps 200 uniformly spaced thresholds from just above the largest
// within-frame pairwise distance down towards 0 and picks the one whose mean clusters per frame is
// closest to the mean number of FEs per frame (ties: larger theta).
ThresholdCalibration CalibrateThreshold(const Dataset &dev,
                                        const MetricHead &head);

// JSON-lines of {instance_id, frame, role_cluster, final_label}.
void WriteClustering(const FEClustering &clustering, std::ostream &out);
FEClustering ReadClustering(std::istream &in);
void SaveClustering(const FEClustering &clustering,
                    const std::filesystem::path &path);
FEClustering LoadClustering(const std::filesystem::path &path);

}  // namespace feinduce

#endif  // FEINDUCE_CLUSTERING_HPP_
