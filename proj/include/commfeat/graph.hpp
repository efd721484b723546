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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace commfeat {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Counts of what was discarded while turning raw edges into a simple graph.
struct CleaningReport {
  std::size_t self_loops = 0;
  std::size_t duplicate_edges = 0;
  std::size_t isolated_nodes = 0;
};

/// Immutable simple undirected graph in compressed adjacency form.
///
/// Nodes are dense ids 0..n-1; every node has degree >= 1 and neighbour
/// lists are sorted and duplicate-free. External labels are kept so that
/// outputs can be written in the caller's id space.
class Graph {
 public:
  Graph() = default;

  /// Builds from raw edges over nodes 0..num_nodes-1. Self-loops and
  /// parallel edges are dropped, nodes left without neighbours are removed
  /// and the remaining ids are compacted preserving relative order.
  /// `labels` (size num_nodes, or empty for "0".."n-1") follows the nodes.
  /// `kept`, when given, receives new id -> original id.
  static Graph from_edges(std::size_t num_nodes, std::span<const Edge> edges,
                          std::vector<std::string> labels = {},
                          CleaningReport* report = nullptr,
                          std::vector<NodeId>* kept = nullptr);

  std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return adjacency_.size() / 2; }
  std::uint64_t total_volume() const noexcept { return adjacency_.size(); }

  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  bool has_edge(NodeId u, NodeId v) const;

  const std::string& label(NodeId v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Sum of degrees over `nodes`. Throws std::out_of_range on a bad id.
  std::uint64_t volume(std::span<const NodeId> nodes) const;

  /// Number of edges with both endpoints in `nodes` (duplicates in `nodes`
  /// are counted once). Throws std::out_of_range on a bad id.
  std::uint64_t induced_edge_count(std::span<const NodeId> nodes) const;

  /// Every edge once, as (u, v) with u < v, in increasing order.
  std::vector<Edge> edges() const;

  /// Subgraph induced by `nodes` (sorted, unique). Labels follow the nodes.
  Graph induced_subgraph(std::span<const NodeId> nodes) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::vector<std::string> labels_;
};

struct EdgeListOptions {
  /// Token separator. '\0' means any run of spaces or tabs.
  char delimiter = '\0';
  char comment = '#';
};

/// Reads a whitespace-separated edge list with arbitrary string tokens.
///
/// Internal ids follow the sorted order of the external labels: numeric
/// order when every label is a non-negative integer, byte order otherwise.
/// This makes the id assignment independent of line order.
Graph load_edge_list(std::istream& in, const EdgeListOptions& options = {},
                     CleaningReport* report = nullptr);

Graph load_edge_list_file(const std::string& path, const EdgeListOptions& options = {},
                          CleaningReport* report = nullptr);

/// Writes one "u v" line per edge using external labels.
void write_edge_list(std::ostream& out, const Graph& g);

/// Writes the `external_id,internal_id` mapping CSV.
void write_id_mapping(std::ostream& out, const Graph& g);

/// Connected component id per node, numbered by smallest member.
std::vector<NodeId> connected_components(const Graph& g, std::size_t* count = nullptr);

/// Subgraph induced by the largest connected component (ties: the one
/// holding the smallest node id).
Graph largest_component(const Graph& g);

}  // namespace commfeat
