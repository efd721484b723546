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

#include "commfeat/partition.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "commfeat/csv.hpp"
#include "commfeat/error.hpp"

namespace commfeat {

Partition Partition::from_labels(const Graph& g, std::span<const std::int64_t> labels) {
  if (labels.size() != g.num_nodes()) {
    throw InputError("partition has " + std::to_string(labels.size()) + " entries for a graph with " +
                     std::to_string(g.num_nodes()) + " nodes");
  }
  Partition p;
  p.assignment_.resize(labels.size());
  std::unordered_map<std::int64_t, CommunityId> index;
  CommunityId next = 0;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] < 0) {
      p.assignment_[v] = next++;
      continue;
    }
    auto [it, inserted] = index.try_emplace(labels[v], next);
    if (inserted) ++next;
    p.assignment_[v] = it->second;
  }
  p.rebuild(g);
  return p;
}

Partition Partition::from_assignment(const Graph& g, std::span<const CommunityId> assignment) {
  std::vector<std::int64_t> labels(assignment.begin(), assignment.end());
  return from_labels(g, labels);
}

Partition Partition::singletons(const Graph& g) {
  Partition p;
  p.assignment_.resize(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) p.assignment_[v] = v;
  p.rebuild(g);
  return p;
}

Partition Partition::whole(const Graph& g) {
  Partition p;
  p.assignment_.assign(g.num_nodes(), 0);
  p.rebuild(g);
  return p;
}

void Partition::rebuild(const Graph& g) {
  CommunityId count = 0;
  for (CommunityId c : assignment_) count = std::max(count, c + 1);
  volume_.assign(count, 0);
  internal_edges_.assign(count, 0);
  size_.assign(count, 0);
  for (NodeId v = 0; v < assignment_.size(); ++v) {
    const CommunityId c = assignment_[v];
    volume_[c] += g.degree(v);
    ++size_[c];
    for (NodeId u : g.neighbors(v)) {
      if (v < u && assignment_[u] == c) ++internal_edges_[c];
    }
  }
}

std::size_t Partition::degree_into(const Graph& g, NodeId v, CommunityId c) const {
  std::size_t count = 0;
  for (NodeId u : g.neighbors(v)) count += assignment_[u] == c;
  return count;
}

void Partition::move(const Graph& g, NodeId v, CommunityId target) {
  if (v >= assignment_.size()) throw std::out_of_range("node id out of range");
  if (target > num_communities()) throw std::out_of_range("community id out of range");
  const CommunityId source = assignment_[v];
  if (target == source) return;
  if (target == num_communities()) {
    if (size_[source] == 1) return;
    volume_.push_back(0);
    internal_edges_.push_back(0);
    size_.push_back(0);
  }
  std::size_t to_source = 0;
  std::size_t to_target = 0;
  for (NodeId u : g.neighbors(v)) {
    to_source += assignment_[u] == source;
    to_target += assignment_[u] == target;
  }
  internal_edges_[source] -= to_source;
  internal_edges_[target] += to_target;
  volume_[source] -= g.degree(v);
  volume_[target] += g.degree(v);
  --size_[source];
  ++size_[target];
  assignment_[v] = target;

  if (size_[source] == 0) {
    const CommunityId last = static_cast<CommunityId>(num_communities() - 1);
    if (source != last) {
      for (auto& c : assignment_) {
        if (c == last) c = source;
      }
      volume_[source] = volume_[last];
      internal_edges_[source] = internal_edges_[last];
      size_[source] = size_[last];
    }
    volume_.pop_back();
    internal_edges_.pop_back();
    size_.pop_back();
  }
}

std::vector<NodeId> Partition::members(CommunityId c) const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < assignment_.size(); ++v) {
    if (assignment_[v] == c) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> Partition::outliers() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < assignment_.size(); ++v) {
    if (size_[assignment_[v]] == 1) out.push_back(v);
  }
  return out;
}

bool Partition::caches_consistent(const Graph& g) const {
  if (assignment_.size() != g.num_nodes()) return false;
  Partition fresh;
  fresh.assignment_ = assignment_;
  fresh.rebuild(g);
  if (fresh.size_.size() != size_.size()) return false;
  if (std::find(size_.begin(), size_.end(), std::size_t{0}) != size_.end()) return false;
  return fresh.volume_ == volume_ && fresh.internal_edges_ == internal_edges_ && fresh.size_ == size_;
}

std::size_t Partition::split_disconnected(const Graph& g) {
  constexpr CommunityId kUnseen = ~CommunityId{0};
  std::vector<CommunityId> piece(assignment_.size(), kUnseen);
  std::vector<char> community_seen(num_communities(), 0);
  CommunityId next = static_cast<CommunityId>(num_communities());
  std::vector<NodeId> stack;
  std::size_t created = 0;
  for (NodeId s = 0; s < assignment_.size(); ++s) {
    if (piece[s] != kUnseen) continue;
    const CommunityId c = assignment_[s];
    CommunityId id = c;
    if (community_seen[c]) {
      id = next++;
      ++created;
    }
    community_seen[c] = 1;
    piece[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId u : g.neighbors(v)) {
        if (piece[u] == kUnseen && assignment_[u] == c) {
          piece[u] = id;
          stack.push_back(u);
        }
      }
    }
  }
  if (created > 0) {
    assignment_ = std::move(piece);
    rebuild(g);
  }
  return created;
}

Partition Partition::canonical(const Graph& g) const {
  return from_assignment(g, assignment_);
}

Partition read_partition_csv(std::istream& in, const Graph& g) {
  const csv::Table table = csv::read_table(in);
  if (table.header.size() != 2 || table.header[1] != "community" ||
      (table.header[0] != "internal_id" && table.header[0] != "node")) {
    throw ParseError("partition header must be 'internal_id,community' or 'node,community'", 1);
  }
  const bool by_label = table.header[0] == "node";
  std::unordered_map<std::string, NodeId> by_name;
  if (by_label) {
    for (NodeId v = 0; v < g.num_nodes(); ++v) by_name.emplace(g.label(v), v);
  }
  constexpr std::int64_t kMissing = std::numeric_limits<std::int64_t>::min();
  std::vector<std::int64_t> labels(g.num_nodes(), kMissing);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.row_lines[r];
    NodeId v = 0;
    if (by_label) {
      auto it = by_name.find(row[0]);
      if (it == by_name.end()) throw InputError("line " + std::to_string(line) + ": unknown node '" + row[0] + "'");
      v = it->second;
    } else {
      auto [ptr, ec] = std::from_chars(row[0].data(), row[0].data() + row[0].size(), v);
      if (ec != std::errc() || ptr != row[0].data() + row[0].size()) {
        throw ParseError("bad internal id '" + row[0] + "'", line);
      }
      if (v >= g.num_nodes()) throw InputError("line " + std::to_string(line) + ": internal id out of range");
    }
    std::int64_t c = 0;
    auto [ptr, ec] = std::from_chars(row[1].data(), row[1].data() + row[1].size(), c);
    if (ec != std::errc() || ptr != row[1].data() + row[1].size()) {
      throw ParseError("bad community '" + row[1] + "'", line);
    }
    if (labels[v] != kMissing) throw InputError("line " + std::to_string(line) + ": node listed twice");
    labels[v] = c;
  }
  const auto missing = std::count(labels.begin(), labels.end(), kMissing);
  if (missing > 0) throw InputError(std::to_string(missing) + " nodes have no community");
  return Partition::from_labels(g, labels);
}

Partition read_partition_file(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open partition '" + path + "'");
  try {
    return read_partition_csv(in, g);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_partition_csv(std::ostream& out, const Partition& p) {
  out << "internal_id,community\n";
  for (NodeId v = 0; v < p.num_nodes(); ++v) out << v << ',' << p.community(v) << '\n';
}

}  // namespace commfeat
