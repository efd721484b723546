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

#include "commfeat/detection.hpp"

#include <omp.h>

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "commfeat/error.hpp"
#include "commfeat/modularity.hpp"
#include "commfeat/random.hpp"

namespace commfeat {

namespace {

// Graph whose nodes are communities of the level below. Edge weights count
// original edges; self_loop[v] counts original edges inside super-node v.
struct LevelGraph {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> targets;
  std::vector<double> weights;
  std::vector<double> self_loop;
  std::vector<double> volume;

  std::size_t size() const { return volume.size(); }
};

LevelGraph base_level(const Graph& g, std::span<const NodeId> rank) {
  const std::size_t n = g.num_nodes();
  LevelGraph level;
  level.offsets.assign(n + 1, 0);
  level.self_loop.assign(n, 0.0);
  level.volume.assign(n, 0.0);
  std::vector<NodeId> original(n);
  for (NodeId v = 0; v < n; ++v) original[rank.empty() ? v : rank[v]] = v;
  for (NodeId r = 0; r < n; ++r) {
    level.offsets[r + 1] = level.offsets[r] + g.degree(original[r]);
    level.volume[r] = static_cast<double>(g.degree(original[r]));
  }
  level.targets.resize(level.offsets[n]);
  level.weights.assign(level.offsets[n], 1.0);
  for (NodeId r = 0; r < n; ++r) {
    auto out = level.targets.begin() + static_cast<std::ptrdiff_t>(level.offsets[r]);
    for (NodeId u : g.neighbors(original[r])) *out++ = rank.empty() ? u : rank[u];
    std::sort(level.targets.begin() + static_cast<std::ptrdiff_t>(level.offsets[r]),
              level.targets.begin() + static_cast<std::ptrdiff_t>(level.offsets[r + 1]));
  }
  return level;
}

double level_quality(const LevelGraph& level, std::span<const CommunityId> community,
                     std::size_t num_communities, double edges, double total, double resolution) {
  std::vector<double> inside(num_communities, 0.0);
  std::vector<double> volume(num_communities, 0.0);
  for (NodeId v = 0; v < level.size(); ++v) {
    const CommunityId c = community[v];
    volume[c] += level.volume[v];
    inside[c] += level.self_loop[v];
    for (std::size_t e = level.offsets[v]; e < level.offsets[v + 1]; ++e) {
      if (community[level.targets[e]] == c) inside[c] += level.weights[e] / 2.0;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < num_communities; ++c) {
    const double share = volume[c] / total;
    q += inside[c] / edges - resolution * share * share;
  }
  return q;
}

class LocalMover {
 public:
  LocalMover(const LevelGraph& level, double edges, double total, double resolution, double min_gain)
      : level_(level),
        edges_(edges),
        total_(total),
        resolution_(resolution),
        min_gain_(min_gain),
        community_(level.size()),
        community_volume_(level.volume),
        link_(level.size(), 0.0) {
    std::iota(community_.begin(), community_.end(), CommunityId{0});
  }

  // Sweeps in `order` until a sweep moves nothing. Returns true if any
  // node changed community.
  bool run(std::span<const NodeId> order, RunTrace* trace) {
    bool any = false;
    while (true) {
      bool moved = false;
      for (NodeId v : order) moved |= visit(v);
      if (trace) trace->sweep_qualities.push_back(quality());
      if (!moved) break;
      any = true;
    }
    return any;
  }

  const std::vector<CommunityId>& community() const { return community_; }

  double quality() const {
    return level_quality(level_, community_, level_.size(), edges_, total_, resolution_);
  }

 private:
  bool visit(NodeId v) {
    const CommunityId own = community_[v];
    const double k = level_.volume[v];
    touched_.clear();
    for (std::size_t e = level_.offsets[v]; e < level_.offsets[v + 1]; ++e) {
      const CommunityId c = community_[level_.targets[e]];
      if (link_[c] == 0.0) touched_.push_back(c);
      link_[c] += level_.weights[e];
    }
    community_volume_[own] -= k;
    const double tax = 2.0 * resolution_ * k / (total_ * total_);
    auto gain = [&](CommunityId c) { return link_[c] / edges_ - tax * community_volume_[c]; };

    const double stay = gain(own);
    CommunityId best = own;
    double best_gain = stay;
    for (CommunityId c : touched_) {
      const double g = gain(c);
      if (g > best_gain || (g == best_gain && c < best)) {
        best = c;
        best_gain = g;
      }
    }
    if (best != own && !(best_gain - stay > min_gain_)) best = own;
    community_volume_[best] += k;
    community_[v] = best;
    for (CommunityId c : touched_) link_[c] = 0.0;
    link_[own] = 0.0;
    return best != own;
  }

  const LevelGraph& level_;
  double edges_;
  double total_;
  double resolution_;
  double min_gain_;
  std::vector<CommunityId> community_;
  std::vector<double> community_volume_;
  std::vector<double> link_;
  std::vector<CommunityId> touched_;
};

// Renumbers communities by first appearance and builds the next level.
LevelGraph aggregate(const LevelGraph& level, std::vector<CommunityId>& community) {
  const std::size_t n = level.size();
  constexpr CommunityId kUnset = ~CommunityId{0};
  std::vector<CommunityId> renumber(n, kUnset);
  CommunityId count = 0;
  for (auto& c : community) {
    if (renumber[c] == kUnset) renumber[c] = count++;
    c = renumber[c];
  }
  std::vector<std::size_t> start(count + 1, 0);
  for (CommunityId c : community) ++start[c + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<NodeId> members(n);
  {
    std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
    for (NodeId v = 0; v < n; ++v) members[cursor[community[v]]++] = v;
  }

  LevelGraph next;
  next.offsets.assign(count + 1, 0);
  next.self_loop.assign(count, 0.0);
  next.volume.assign(count, 0.0);
  std::vector<double> link(count, 0.0);
  std::vector<CommunityId> touched;
  for (CommunityId c = 0; c < count; ++c) {
    touched.clear();
    for (std::size_t i = start[c]; i < start[c + 1]; ++i) {
      const NodeId v = members[i];
      next.volume[c] += level.volume[v];
      next.self_loop[c] += level.self_loop[v];
      for (std::size_t e = level.offsets[v]; e < level.offsets[v + 1]; ++e) {
        const CommunityId d = community[level.targets[e]];
        if (d == c) {
          next.self_loop[c] += level.weights[e] / 2.0;
        } else {
          if (link[d] == 0.0) touched.push_back(d);
          link[d] += level.weights[e];
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    for (CommunityId d : touched) {
      next.targets.push_back(d);
      next.weights.push_back(link[d]);
      link[d] = 0.0;
    }
    next.offsets[c + 1] = next.targets.size();
  }
  return next;
}

void check_config(const Graph& g, const DetectConfig& cfg) {
  if (g.num_nodes() == 0) throw InputError("cannot detect communities in an empty graph");
  if (!(cfg.resolution > 0.0)) throw ParameterError("resolution must be positive");
  if (cfg.restarts == 0) throw ParameterError("restarts must be at least 1");
  if (cfg.max_levels == 0) throw ParameterError("max_levels must be at least 1");
  if (!(cfg.min_gain >= 0.0)) throw ParameterError("min_gain must be nonnegative");
  if (!cfg.node_rank.empty()) {
    if (cfg.node_rank.size() != g.num_nodes()) throw ParameterError("node_rank size mismatch");
    std::vector<char> seen(g.num_nodes(), 0);
    for (NodeId r : cfg.node_rank) {
      if (r >= g.num_nodes() || seen[r]) throw ParameterError("node_rank is not a permutation");
      seen[r] = 1;
    }
  }
}

}  // namespace

Partition detect_once(const Graph& g, const DetectConfig& cfg, std::uint64_t seed, RunTrace* trace) {
  check_config(g, cfg);
  Rng rng(seed);
  const double edges = static_cast<double>(g.num_edges());
  const double total = static_cast<double>(g.total_volume());

  LevelGraph level = base_level(g, cfg.node_rank);
  std::vector<CommunityId> membership(g.num_nodes());
  std::iota(membership.begin(), membership.end(), CommunityId{0});
  std::vector<NodeId> order;

  for (std::size_t depth = 0; depth < cfg.max_levels; ++depth) {
    order.resize(level.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    rng.shuffle(std::span<NodeId>(order));
    LocalMover mover(level, edges, total, cfg.resolution, cfg.min_gain);
    const bool moved = mover.run(order, trace);
    std::vector<CommunityId> community = mover.community();
    if (trace) trace->level_qualities.push_back(mover.quality());
    if (!moved) break;
    level = aggregate(level, community);
    for (auto& c : membership) c = community[c];
  }

  std::vector<CommunityId> assignment(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    assignment[v] = membership[cfg.node_rank.empty() ? v : cfg.node_rank[v]];
  }
  Partition p = Partition::from_assignment(g, assignment);
  if (trace) trace->expanded_quality = generalized_modularity(g, p, cfg.resolution);
  const std::size_t split = p.split_disconnected(g);
  if (trace) trace->split_communities = split;
  return p;
}

DetectResult detect(const Graph& g, const DetectConfig& cfg) {
  check_config(g, cfg);
  DetectResult result;
  result.restart_qualities.assign(cfg.restarts, 0.0);
  const int threads = static_cast<int>(std::max<std::size_t>(1, cfg.threads));

  struct Best {
    double quality = -std::numeric_limits<double>::infinity();
    std::size_t restart = std::numeric_limits<std::size_t>::max();
    Partition partition;
  };
  std::vector<Best> per_thread(static_cast<std::size_t>(threads));

#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(cfg.restarts); ++r) {
    Partition p = detect_once(g, cfg, cfg.seed + static_cast<std::uint64_t>(r));
    const double q = generalized_modularity(g, p, cfg.resolution);
    result.restart_qualities[static_cast<std::size_t>(r)] = q;
    Best& best = per_thread[static_cast<std::size_t>(omp_get_thread_num())];
    const auto index = static_cast<std::size_t>(r);
    if (q > best.quality || (q == best.quality && index < best.restart)) {
      best.quality = q;
      best.restart = index;
      best.partition = std::move(p);
    }
  }

  Best* winner = nullptr;
  for (Best& b : per_thread) {
    if (b.restart == std::numeric_limits<std::size_t>::max()) continue;
    if (!winner || b.quality > winner->quality ||
        (b.quality == winner->quality && b.restart < winner->restart)) {
      winner = &b;
    }
  }
  result.partition = std::move(winner->partition);
  result.quality = winner->quality;
  result.best_restart = winner->restart;
  return result;
}

std::size_t best_partition_index(const Graph& g, std::span<const Partition> candidates,
                                 double resolution) {
  if (candidates.empty()) throw std::invalid_argument("no candidate partitions");
  std::size_t best = 0;
  double best_quality = generalized_modularity(g, candidates[0], resolution);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double q = generalized_modularity(g, candidates[i], resolution);
    if (q > best_quality) {
      best = i;
      best_quality = q;
    }
  }
  return best;
}

const Partition& best_partition_of(const Graph& g, std::span<const Partition> candidates,
                                   double resolution) {
  return candidates[best_partition_index(g, candidates, resolution)];
}

}  // namespace commfeat
