/*
Copyright 2026 The commfeat Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "commfeat/feature_matrix.hpp"
#include "commfeat/graph.hpp"
#include "commfeat/partition.hpp"

namespace commfeat {

/// Column order of the community-aware feature table.
inline constexpr std::array<std::string_view, 13> kCommunityFeatureNames = {
    "CADA",   "CADA*",  "WMD",    "CPC",    "CAS",    "CD_L11", "CD_L21",
    "CD_KL1", "CD_HD1", "CD_L12", "CD_L22", "CD_KL2", "CD_HD2"};

/// Per-node neighbour counts by community plus the volume-share null
/// vector. Built in one pass over the edges.
class CommunityProfile {
 public:
  struct Entry {
    CommunityId community;
    std::uint32_t count;
  };

  static CommunityProfile build(const Graph& g, const Partition& p);

  std::size_t num_nodes() const noexcept { return offsets_.size() - 1; }
  std::size_t num_communities() const noexcept { return volume_.size(); }

  /// Communities holding at least one neighbour of v, ascending.
  std::span<const Entry> entries(NodeId v) const {
    return {entries_.data() + offsets_[v], entries_.data() + offsets_[v + 1]};
  }

  /// deg_{A}(v) for v's own community A.
  std::uint32_t own_count(NodeId v) const { return own_count_[v]; }
  std::uint32_t degree(NodeId v) const { return degree_[v]; }

  std::uint64_t volume(CommunityId c) const { return volume_[c]; }
  std::uint64_t total_volume() const noexcept { return total_volume_; }
  /// vol(A_c) / vol(V).
  double null_share(CommunityId c) const { return static_cast<double>(volume_[c]) / static_cast<double>(total_volume_); }
  /// sum over all communities of vol(A_c)^2. Requires vol(V) < 2^32.
  std::uint64_t volume_square_sum() const noexcept { return volume_square_sum_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
  std::vector<std::uint32_t> own_count_;
  std::vector<std::uint32_t> degree_;
  std::vector<std::uint64_t> volume_;
  std::uint64_t total_volume_ = 0;
  std::uint64_t volume_square_sum_ = 0;
};

/// The four distances between a node's community distribution and the
/// null vector.
struct Distances {
  double l1 = 0.0;
  double l2 = 0.0;
  double kl = 0.0;
  double hellinger = 0.0;
};

/// Sparse distribution over communities: (community, probability), sorted
/// by community, probabilities > 0.
using SparseDistribution = std::vector<std::pair<CommunityId, double>>;

/// Distances from `dist` to the null vector of `profile`, touching only
/// the support of `dist`; mass outside the support is accounted for by
/// complements of the precomputed null sums.
Distances distances_to_null(const CommunityProfile& profile, std::span<const std::pair<CommunityId, double>> dist);

/// Scratch space for two-step distributions; one per worker.
class Depth2Workspace {
 public:
  explicit Depth2Workspace(std::size_t num_communities) : mass_(num_communities, 0.0) {}

 private:
  friend class CommunityFeatures;
  std::vector<double> mass_;
  std::vector<CommunityId> touched_;
};

/// Evaluates the community-aware features over a fixed (graph, partition).
///
/// Construction builds the profile and the per-community internal-degree
/// statistics; every per-node query afterwards is read-only and safe to
/// call concurrently (each worker brings its own Depth2Workspace).
class CommunityFeatures {
 public:
  /// Keeps references to g and p, which must outlive this object.
  CommunityFeatures(const Graph& g, const Partition& p, double resolution = 1.0);
  CommunityFeatures(const Graph&&, const Partition&, double = 1.0) = delete;
  CommunityFeatures(const Graph&, const Partition&&, double = 1.0) = delete;
  CommunityFeatures(const Graph&&, const Partition&&, double = 1.0) = delete;

  const CommunityProfile& profile() const noexcept { return profile_; }

  /// deg(v) / max_c deg_c(v).
  double cada(NodeId v) const;
  /// deg_own(v) / deg(v).
  double cada_norm(NodeId v) const;
  /// Z-score of the internal degree within the own community (0 if the
  /// community's internal degrees have zero spread).
  double wmd(NodeId v) const;
  /// 1 - sum_c (deg_c(v) / deg(v))^2.
  double cpc(NodeId v) const;
  /// Singleton-move threshold beta*(v).
  double cas(NodeId v) const;

  SparseDistribution q1_vector(NodeId v) const;
  SparseDistribution q2_vector(NodeId v, Depth2Workspace& ws) const;
  SparseDistribution q2_vector(NodeId v) const;

  Distances depth1(NodeId v) const;
  Distances depth2(NodeId v, Depth2Workspace& ws) const;
  Distances depth2(NodeId v) const;

  /// All 13 columns for all nodes, rows indexed by node id.
  FeatureMatrix compute_all(std::size_t threads = 1) const;

 private:
  const Graph& graph_;
  const Partition& partition_;
  double resolution_;
  CommunityProfile profile_;
  std::vector<double> internal_mean_;
  std::vector<double> internal_sd_;
};

/// Convenience wrapper around CommunityFeatures::compute_all.
FeatureMatrix compute_community_features(const Graph& g, const Partition& p,
                                         double resolution = 1.0, std::size_t threads = 1);

}  // namespace commfeat
