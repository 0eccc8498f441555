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

// Synthetic argument corpus. Each embedding is
//
//   role prototype + frame offset + noise_scale * (isotropic + topic noise)
//
// rotated into a random basis and l2-normalized. Role prototypes live in a
// low-dimensional role subspace and are orthonormal within a frame. The
// frame offset and the topic noise (a few high-variance directions shared
// by the whole corpus, standing in for sentence-level meaning) live in the
// orthogonal context subspace. Raw embeddings are therefore dominated by
// context, and a linear head trained on some frames can learn to suppress
// it for unseen frames.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "feinduce/corpus.hpp"
#include "feinduce/errors.hpp"
#include "feinduce/metric_head.hpp"

namespace feinduce {
namespace {

// Per-coordinate isotropic noise, relative to noise_scale.
constexpr double kIsotropicFactor = 0.5;
// Standard deviation along each topic direction, relative to noise_scale.
constexpr double kTopicFactor = 2.0;
constexpr std::size_t kTopics = 4;
// Norm of the per-frame context offset.
constexpr double kFrameOffsetNorm = 1.0;

const char *const kRoleNames[] = {"Agent",  "Theme",      "Recipient",
                                  "Goal",   "Source",     "Instrument",
                                  "Manner", "Place"};
const char *const kObjectLabels[] = {"obj",   "obl",   "iobj", "ccomp",
                                     "xcomp", "nmod",  "advcl"};
constexpr std::size_t kNumObjectLabels = std::size(kObjectLabels);

std::string RoleName(std::size_t j) {
  if (j < std::size(kRoleNames)) return kRoleNames[j];
  return "Role" + std::to_string(j);
}

std::string Padded(const char *prefix, std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, value);
  return buf;
}

Vector RandomUnit(std::size_t dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  do {
    for (std::size_t i = 0; i < dim; ++i) v[i] = normal(rng);
  } while (v.norm() == 0.0);
  return v.normalized();
}

// Gram-Schmidt in place. Vectors that become (numerically) dependent are
// replaced by fresh directions orthogonal to the rest when possible; with
// more vectors than dimensions the surplus stays as drawn.
void Orthonormalize(std::vector<Vector> *vectors) {
  std::vector<Vector> &v = *vectors;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i >= static_cast<std::size_t>(v[i].size())) {
      v[i].normalize();
      continue;
    }
    for (std::size_t j = 0; j < i; ++j) v[i] -= v[j].dot(v[i]) * v[j];
    const double norm = v[i].norm();
    if (norm > 1e-9) {
      v[i] /= norm;
    } else {
      Vector e = Vector::Unit(v[i].size(), i);
      for (std::size_t j = 0; j < i; ++j) e -= v[j].dot(e) * v[j];
      v[i] = e.normalized();
    }
  }
}

}  // namespace

Dataset GenerateSynthetic(const SynthConfig &config, std::uint64_t seed) {
  if (config.n_frames == 0 || config.fes_per_frame == 0 ||
      config.instances_per_fe == 0)
    throw DataError("synthetic config needs positive counts");
  if (config.dim < 4) throw DataError("synthetic dim must be at least 4");
  if (!(config.noise_scale >= 0) || !(config.shared_role_fraction >= 0) ||
      config.shared_role_fraction > 1)
    throw DataError("synthetic noise_scale must be >= 0 and "
                    "shared_role_fraction in [0, 1]");

  const std::size_t dim = config.dim;
  const std::size_t role_dim = std::max<std::size_t>(2, dim / 4);
  const std::size_t context_dim = dim - role_dim;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  // Random rotation so the role subspace is not axis-aligned.
  Matrix gaussian(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) gaussian(i, j) = normal(rng);
  const Matrix rotation = Eigen::HouseholderQR<Matrix>(gaussian).householderQ();

  std::vector<Vector> shared_roles;
  for (std::size_t j = 0; j < config.fes_per_frame; ++j)
    shared_roles.push_back(RandomUnit(role_dim, rng));
  Orthonormalize(&shared_roles);

  const std::size_t n_topics = std::min(kTopics, context_dim);
  std::vector<Vector> topics;
  for (std::size_t q = 0; q < n_topics; ++q)
    topics.push_back(RandomUnit(context_dim, rng));
  Orthonormalize(&topics);

  const double iso_sigma = config.noise_scale * kIsotropicFactor;
  const double topic_sigma = config.noise_scale * kTopicFactor;

  std::vector<ArgumentInstance> instances;
  instances.reserve(config.n_frames * config.fes_per_frame *
                    config.instances_per_fe);
  for (std::size_t f = 0; f < config.n_frames; ++f) {
    const std::string frame = Padded("Frame_", f, 2);
    const Vector offset = kFrameOffsetNorm * RandomUnit(context_dim, rng);
    // Shared prototypes are already orthonormal; frame-specific ones are
    // orthogonalized against them and each other.
    std::vector<bool> shared(config.fes_per_frame);
    for (std::size_t j = 0; j < config.fes_per_frame; ++j)
      shared[j] = uniform(rng) < config.shared_role_fraction;
    std::vector<Vector> basis;
    std::vector<std::size_t> slot(config.fes_per_frame);
    for (std::size_t j = 0; j < config.fes_per_frame; ++j)
      if (shared[j]) {
        slot[j] = basis.size();
        basis.push_back(shared_roles[j]);
      }
    for (std::size_t j = 0; j < config.fes_per_frame; ++j)
      if (!shared[j]) {
        slot[j] = basis.size();
        basis.push_back(RandomUnit(role_dim, rng));
      }
    Orthonormalize(&basis);
    std::vector<Vector> prototypes;
    for (std::size_t j = 0; j < config.fes_per_frame; ++j)
      prototypes.push_back(basis[slot[j]]);
    for (std::size_t t = 0; t < config.instances_per_fe; ++t) {
      const std::string sentence = Padded("f", f, 2) + Padded("_s", t, 3);
      const std::string verb =
          Padded("verb", f, 2) + "_" + std::to_string(t % 3);
      for (std::size_t j = 0; j < config.fes_per_frame; ++j) {
        Vector latent(dim);
        latent.head(role_dim) = prototypes[j];
        latent.tail(context_dim) = offset;
        for (const Vector &topic : topics)
          latent.tail(context_dim) += topic_sigma * normal(rng) * topic;
        for (std::size_t i = 0; i < dim; ++i)
          latent[i] += iso_sigma * normal(rng);
        Vector x = rotation * latent;
        x.normalize();

        ArgumentInstance inst;
        inst.instance_id = sentence + "_a" + std::to_string(j);
        inst.sentence_id = sentence;
        inst.frame = frame;
        inst.fe_label = RoleName(j);
        inst.verb_lemma = verb;
        const bool typical = uniform(rng) < 0.9;
        if (j == 0) {
          inst.position = typical ? Position::kBefore : Position::kAfter;
          inst.dep_label = typical ? "nsubj" : kObjectLabels[rng() % 2];
        } else {
          inst.position = typical ? Position::kAfter : Position::kBefore;
          const bool usual_label = uniform(rng) < 0.8;
          inst.dep_label =
              usual_label ? kObjectLabels[(j - 1) % kNumObjectLabels]
                          : kObjectLabels[rng() % kNumObjectLabels];
        }
        inst.embedding.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
          inst.embedding[i] = static_cast<float>(x[i]);
        instances.push_back(std::move(inst));
      }
    }
  }
  return Dataset(std::move(instances), dim);
}

}  // namespace feinduce
