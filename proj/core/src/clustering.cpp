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

#include "feinduce/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "feinduce/errors.hpp"

namespace feinduce {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Upper-triangular pairwise distances without the diagonal.
class CondensedDistances {
 public:
  explicit CondensedDistances(const Matrix &points)
      : n_(static_cast<std::size_t>(points.rows())),
        values_(n_ * (n_ - 1) / 2) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        values_[idx++] = (points.row(i) - points.row(j)).norm();
  }

  double &at(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return values_[i * n_ - i * (i + 1) / 2 + (j - i - 1)];
  }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

std::size_t FindRoot(std::vector<std::size_t> &parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

std::size_t LinkageMemoryBytes(std::size_t n) {
  return n < 2 ? 0 : n * (n - 1) / 2 * sizeof(double);
}

Linkage GroupAverageCluster(const Matrix &points, const StopRule &stop) {
  const std::size_t n = static_cast<std::size_t>(points.rows());
  if (n == 0) throw DataError("cannot cluster an empty set");
  std::size_t target = 1;
  double theta = kInf;
  if (const auto *count = std::get_if<ClusterCount>(&stop)) {
    if (count->k == 0) throw DataError("cluster count must be positive");
    if (count->k > n)
      throw DataError("cluster count " + std::to_string(count->k) +
                      " exceeds the " + std::to_string(n) + " points");
    target = count->k;
  } else {
    theta = std::get<DistanceThreshold>(stop).theta;
    if (!(theta >= 0)) throw DataError("distance threshold must be >= 0");
  }

  CondensedDistances dist(points);
  std::vector<char> active(n, 1);
  std::vector<std::size_t> size(n, 1), nearest(n, 0), version(n, 0);
  std::vector<double> min_dist(n, kInf);

  // (distance, row, version); smallest distance first, then smallest row.
  using Entry = std::tuple<double, std::size_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;

  // Nearest active j > i; ties go to the smaller j.
  auto refresh = [&](std::size_t i) {
    double best = kInf;
    std::size_t best_j = i;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!active[j]) continue;
      const double d = dist.at(i, j);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    min_dist[i] = best;
    nearest[i] = best_j;
    ++version[i];
    if (best < kInf) heap.emplace(best, i, version[i]);
  };
  for (std::size_t i = 0; i + 1 < n; ++i) refresh(i);

  Linkage out;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::size_t clusters = n;
  while (clusters > target && !heap.empty()) {
    const auto [d, a, ver] = heap.top();
    if (!active[a] || ver != version[a]) {
      heap.pop();
      continue;
    }
    if (d >= theta) break;
    heap.pop();
    const std::size_t b = nearest[a];
    if (!out.merge_distances.empty()) {
      const double prev = out.merge_distances.back();
      if (d < prev - 1e-9 * std::max(1.0, prev))
        throw NumericalError("average-linkage merge distances decreased");
    }
    out.merge_distances.push_back(d);

    // Merge b into a (a < b); a keeps the smaller first member.
    const double wa = static_cast<double>(size[a]);
    const double wb = static_cast<double>(size[b]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      double &dak = dist.at(a, k);
      dak = (wa * dak + wb * dist.at(b, k)) / (wa + wb);
    }
    active[b] = 0;
    size[a] += size[b];
    parent[b] = a;
    --clusters;

    refresh(a);
    for (std::size_t k = 0; k < b; ++k) {
      if (!active[k] || k == a) continue;
      if (k < a) {
        if (nearest[k] == a || nearest[k] == b) {
          refresh(k);
        } else {
          const double dka = dist.at(k, a);
          if (dka < min_dist[k] || (dka == min_dist[k] && a < nearest[k])) {
            min_dist[k] = dka;
            nearest[k] = a;
            heap.emplace(dka, k, ++version[k]);
          }
        }
      } else if (nearest[k] == b) {
        refresh(k);
      }
    }
  }

  out.assignment.assign(n, -1);
  std::vector<int> id_of_root(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = FindRoot(parent, i);
    if (id_of_root[root] < 0) id_of_root[root] = next++;
    out.assignment[i] = id_of_root[root];
  }
  out.n_clusters = static_cast<std::size_t>(next);
  return out;
}

std::size_t FEClustering::CountClusters() const {
  std::set<FELabel> labels;
  for (const Entry &e : entries) labels.insert(e.label);
  return labels.size();
}

FEClustering MergeFrameRole(
    const std::map<std::string, std::string> &gold_frames,
    const RoleClustering &roles) {
  FEClustering out;
  for (const auto &[id, role] : roles.assignment) {
    auto it = gold_frames.find(id);
    if (it == gold_frames.end())
      throw DataError("instance \"" + id + "\" has no gold frame");
    out.entries.push_back({id, {it->second, role}});
  }
  if (gold_frames.size() != roles.assignment.size()) {
    for (const auto &[id, frame] : gold_frames)
      if (!roles.assignment.count(id))
        throw DataError("instance \"" + id + "\" has no role cluster");
  }
  return out;
}

std::size_t RoleClusterCount(const DatasetStats &dev_stats) {
  if (dev_stats.n_frames == 0)
    throw DataError("cannot derive a cluster count from zero frames");
  // Half-up rounding of n_fes / n_frames in integer arithmetic.
  const std::size_t k =
      (2 * dev_stats.n_fes + dev_stats.n_frames) / (2 * dev_stats.n_frames);
  return std::max<std::size_t>(1, k);
}

namespace {

Matrix Rows(const Matrix &all, const std::vector<std::size_t> &rows) {
  Matrix out(rows.size(), all.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(r) = all.row(rows[r]);
  return out;
}

// Instance positions per frame, frames in first-appearance order.
std::vector<std::vector<std::size_t>> FrameGroups(const Dataset &dataset) {
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto [it, added] = index.emplace(dataset[i].frame, groups.size());
    if (added) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

}  // namespace

FEClustering CrossFrameCluster(const Dataset &test, const MetricHead &head,
                               std::size_t k_roles,
                               const ClusterOptions &options) {
  if (test.empty()) throw DataError("empty test set");
  if (k_roles == 0) throw DataError("k_roles must be positive");
  const Matrix embedded = head.Embed(test);
  const std::size_t n = test.size();

  std::vector<int> role(n, -1);
  if (n <= options.max_instances) {
    role = GroupAverageCluster(embedded, ClusterCount{k_roles}).assignment;
  } else {
    warn("cross-frame clustering of " + std::to_string(n) +
         " instances subsampled to " + std::to_string(options.max_instances) +
         "; remaining instances join the nearest role centroid");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(options.seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> sample(order.begin(),
                                    order.begin() + options.max_instances);
    std::sort(sample.begin(), sample.end());
    const Linkage linkage =
        GroupAverageCluster(Rows(embedded, sample), ClusterCount{k_roles});
    Matrix centroids = Matrix::Zero(linkage.n_clusters, embedded.cols());
    std::vector<double> counts(linkage.n_clusters, 0);
    for (std::size_t r = 0; r < sample.size(); ++r) {
      role[sample[r]] = linkage.assignment[r];
      centroids.row(linkage.assignment[r]) += embedded.row(sample[r]);
      counts[linkage.assignment[r]] += 1;
    }
    for (std::size_t c = 0; c < linkage.n_clusters; ++c)
      centroids.row(c) /= counts[c];
    for (std::size_t i = 0; i < n; ++i) {
      if (role[i] >= 0) continue;
      Eigen::Index best = 0;
      (centroids.rowwise() - embedded.row(i)).rowwise().squaredNorm().minCoeff(&best);
      role[i] = static_cast<int>(best);
    }
  }

  RoleClustering roles;
  std::map<std::string, std::string> gold_frames;
  for (std::size_t i = 0; i < n; ++i) {
    roles.assignment[test[i].instance_id] = role[i];
    gold_frames[test[i].instance_id] = test[i].frame;
  }
  const FEClustering merged = MergeFrameRole(gold_frames, roles);
  std::map<std::string, FELabel> label_of;
  for (const auto &e : merged.entries) label_of[e.instance_id] = e.label;
  FEClustering out;
  for (const ArgumentInstance &inst : test.instances())
    out.entries.push_back({inst.instance_id, label_of.at(inst.instance_id)});
  return out;
}

FEClustering IntraFrameCluster(const Dataset &test, const MetricHead &head,
                               double theta) {
  if (test.empty()) throw DataError("empty test set");
  if (!(theta > 0)) throw DataError("distance threshold must be positive");
  const Matrix embedded = head.Embed(test);
  std::vector<FELabel> labels(test.size());
  for (const std::vector<std::size_t> &group : FrameGroups(test)) {
    const Linkage linkage =
        GroupAverageCluster(Rows(embedded, group), DistanceThreshold{theta});
    for (std::size_t r = 0; r < group.size(); ++r)
      labels[group[r]] = {test[group[r]].frame, linkage.assignment[r]};
  }
  FEClustering out;
  for (std::size_t i = 0; i < test.size(); ++i)
    out.entries.push_back({test[i].instance_id, labels[i]});
  return out;
}

ThresholdCalibration CalibrateThreshold(const Dataset &dev,
                                        const MetricHead &head) {
  if (dev.empty()) throw DataError("empty development set");
  const Matrix embedded = head.Embed(dev);
  const auto groups = FrameGroups(dev);

  // One full merge sequence per frame; with non-decreasing merge distances
  // the cluster count at threshold t is n minus the merges below t.
  std::vector<std::vector<double>> merges;
  std::vector<std::size_t> sizes;
  double max_pair = 0;
  double target = 0;
  for (const std::vector<std::size_t> &group : groups) {
    const Matrix points = Rows(embedded, group);
    for (Eigen::Index i = 0; i < points.rows(); ++i)
      for (Eigen::Index j = i + 1; j < points.rows(); ++j)
        max_pair = std::max(max_pair, (points.row(i) - points.row(j)).norm());
    merges.push_back(GroupAverageCluster(points, ClusterCount{1}).merge_distances);
    sizes.push_back(group.size());
    std::set<std::string> fes;
    for (std::size_t i : group) fes.insert(dev[i].fe_label);
    target += static_cast<double>(fes.size());
  }
  target /= static_cast<double>(groups.size());

  auto mean_clusters = [&](double theta) {
    double total = 0;
    for (std::size_t f = 0; f < merges.size(); ++f) {
      std::size_t done = 0;
      while (done < merges[f].size() && merges[f][done] < theta) ++done;
      total += static_cast<double>(sizes[f] - done);
    }
    return total / static_cast<double>(merges.size());
  };

  constexpr int kSteps = 200;
  const double top = std::nextafter(std::max(max_pair, 1e-12), kInf);
  ThresholdCalibration best;
  double best_gap = kInf;
  for (int g = 0; g < kSteps; ++g) {
    const double theta = top * static_cast<double>(kSteps - g) / kSteps;
    const double mean = mean_clusters(theta);
    const double gap = std::abs(mean - target);
    if (gap < best_gap) {
      best_gap = gap;
      best = {theta, mean, target};
    }
  }
  return best;
}

void WriteClustering(const FEClustering &clustering, std::ostream &out) {
  for (const auto &e : clustering.entries) {
    nlohmann::ordered_json record;
    record["instance_id"] = e.instance_id;
    record["frame"] = e.label.frame;
    record["role_cluster"] = e.label.role;
    record["final_label"] = e.label.frame + "/" + std::to_string(e.label.role);
    out << record.dump() << "\n";
  }
}

FEClustering ReadClustering(std::istream &in) {
  FEClustering out;
  std::string text;
  long line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const nlohmann::json record = nlohmann::json::parse(text);
      out.entries.push_back({record.at("instance_id").get<std::string>(),
                             {record.at("frame").get<std::string>(),
                              record.at("role_cluster").get<int>()}});
    } catch (const nlohmann::json::exception &e) {
      throw DataError(std::string("malformed clustering record: ") + e.what(),
                      line);
    }
  }
  return out;
}

void SaveClustering(const FEClustering &clustering,
                    const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  WriteClustering(clustering, out);
}

FEClustering LoadClustering(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open clustering " + path.string());
  return ReadClustering(in);
}

}  // namespace feinduce
