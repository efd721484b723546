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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "commfeat/graph.hpp"

namespace commfeat {

using CommunityId = std::uint32_t;

/// Assignment of every node to one of `num_communities()` nonempty
/// communities, with per-community volume, internal edge count and size
/// cached and kept current under single-node moves.
class Partition {
 public:
  Partition() = default;

  /// Compacts arbitrary integer labels to 0..l-1 in order of first
  /// appearance over nodes 0..n-1. Each node with a negative label becomes
  /// its own singleton community (used as the outlier marker in files).
  static Partition from_labels(const Graph& g, std::span<const std::int64_t> labels);
  static Partition from_assignment(const Graph& g, std::span<const CommunityId> assignment);
  static Partition singletons(const Graph& g);
  static Partition whole(const Graph& g);

  std::size_t num_nodes() const noexcept { return assignment_.size(); }
  std::size_t num_communities() const noexcept { return size_.size(); }

  CommunityId community(NodeId v) const { return assignment_[v]; }
  const std::vector<CommunityId>& assignment() const noexcept { return assignment_; }

  std::uint64_t volume(CommunityId c) const { return volume_[c]; }
  std::uint64_t internal_edges(CommunityId c) const { return internal_edges_[c]; }
  std::size_t size(CommunityId c) const { return size_[c]; }

  /// Number of neighbours of v inside community c.
  std::size_t degree_into(const Graph& g, NodeId v, CommunityId c) const;

  /// Moves v into `target`; target == num_communities() opens a new
  /// singleton. A community left empty is removed and the last community
  /// takes over its index.
  void move(const Graph& g, NodeId v, CommunityId target);

  std::vector<NodeId> members(CommunityId c) const;

  /// Nodes sitting in singleton communities, ascending.
  std::vector<NodeId> outliers() const;

  /// Recomputes every cache from scratch and compares.
  bool caches_consistent(const Graph& g) const;

  /// Splits communities that are not connected in g into their connected
  /// pieces. Returns the number of extra communities created.
  std::size_t split_disconnected(const Graph& g);

  /// Same communities, renumbered by first appearance over node order.
  Partition canonical(const Graph& g) const;

 private:
  void rebuild(const Graph& g);

  std::vector<CommunityId> assignment_;
  std::vector<std::uint64_t> volume_;
  std::vector<std::uint64_t> internal_edges_;
  std::vector<std::size_t> size_;
};

/// Reads a partition CSV. The header is either `internal_id,community`
/// (ids index the graph directly) or `node,community` (external labels).
/// Every node must appear exactly once.
Partition read_partition_csv(std::istream& in, const Graph& g);
Partition read_partition_file(const std::string& path, const Graph& g);

/// Writes `internal_id,community`.
void write_partition_csv(std::ostream& out, const Partition& p);

}  // namespace commfeat
