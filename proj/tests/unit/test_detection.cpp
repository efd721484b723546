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

#include <algorithm>
#include <map>
#include <numeric>

#include "commfeat/detection.hpp"
#include "commfeat/error.hpp"
#include "commfeat/generator.hpp"
#include "commfeat/metrics.hpp"
#include "commfeat/modularity.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace commfeat;
using namespace commfeat::testing;

namespace {

GenOutput small_benchmark(double xi, std::uint64_t seed) {
  GenSpec spec;
  spec.n = 2000;
  spec.outliers = 0;
  spec.min_degree = 5;
  spec.max_degree = 50;
  spec.min_size = 50;
  spec.max_size = 400;
  spec.xi = xi;
  spec.seed = seed;
  return generate(spec);
}

bool communities_connected(const Graph& g, const Partition& p) {
  for (CommunityId c = 0; c < p.num_communities(); ++c) {
    const auto members = p.members(c);
    std::vector<char> seen(g.num_nodes(), 0);
    std::vector<NodeId> stack = {members.front()};
    seen[members.front()] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId u : g.neighbors(v)) {
        if (!seen[u] && p.community(u) == c) {
          seen[u] = 1;
          ++reached;
          stack.push_back(u);
        }
      }
    }
    if (reached != members.size()) return false;
  }
  return true;
}

std::vector<std::size_t> sorted_sizes(const Partition& p) {
  std::vector<std::size_t> sizes;
  for (CommunityId c = 0; c < p.num_communities(); ++c) sizes.push_back(p.size(c));
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

}  // namespace

TEST_CASE("two cliques are recovered and are the modularity optimum") {
  const Graph g = two_cliques();
  DetectConfig cfg;
  cfg.seed = 4;
  const DetectResult result = detect(g, cfg);
  const std::vector<CommunityId> expected = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  CHECK(result.partition.assignment() == expected);

  double best = -1.0;
  std::vector<std::int64_t> best_labels;
  for_each_set_partition(g.num_nodes(), [&](const std::vector<std::int64_t>& labels) {
    const double q = modularity(g, Partition::from_labels(g, labels));
    if (q > best + 1e-12) {
      best = q;
      best_labels = labels;
    }
  });
  CHECK(best_labels == std::vector<std::int64_t>{0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
  CHECK(std::abs(result.quality - best) < 1e-12);
}

TEST_CASE("detection is deterministic and independent of the thread count") {
  const GenOutput bench = small_benchmark(0.4, 9);
  DetectConfig cfg;
  cfg.seed = 77;
  cfg.restarts = 6;
  const DetectResult a = detect(bench.graph, cfg);
  const DetectResult b = detect(bench.graph, cfg);
  cfg.threads = 3;
  const DetectResult c = detect(bench.graph, cfg);
  CHECK(a.partition.assignment() == b.partition.assignment());
  CHECK(a.partition.assignment() == c.partition.assignment());
  CHECK(a.restart_qualities == c.restart_qualities);
  CHECK(a.best_restart == c.best_restart);
}

TEST_CASE("result is the best restart and its quality is exact") {
  const GenOutput bench = small_benchmark(0.3, 2);
  DetectConfig cfg;
  cfg.seed = 100;
  cfg.restarts = 5;
  const DetectResult result = detect(bench.graph, cfg);
  REQUIRE(result.restart_qualities.size() == 5);
  const auto top = std::max_element(result.restart_qualities.begin(), result.restart_qualities.end());
  CHECK(result.best_restart == static_cast<std::size_t>(top - result.restart_qualities.begin()));
  CHECK(result.quality == *top);
  CHECK(std::abs(result.quality - modularity(bench.graph, result.partition)) < 1e-12);
  const Partition single = detect_once(bench.graph, cfg, cfg.seed + result.best_restart);
  CHECK(single.assignment() == result.partition.assignment());
}

TEST_CASE("objective never decreases within a run") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const GenOutput bench = small_benchmark(0.5, seed);
    DetectConfig cfg;
    RunTrace trace;
    const Partition p = detect_once(bench.graph, cfg, seed, &trace);
    REQUIRE(trace.sweep_qualities.size() >= 2);
    for (std::size_t i = 1; i < trace.sweep_qualities.size(); ++i) {
      CHECK(trace.sweep_qualities[i] >= trace.sweep_qualities[i - 1] - 1e-12);
    }
    for (std::size_t i = 1; i < trace.level_qualities.size(); ++i) {
      CHECK(trace.level_qualities[i] >= trace.level_qualities[i - 1] - 1e-12);
    }
    // Expanding the aggregated partition does not change the objective.
    CHECK(std::abs(trace.expanded_quality - trace.level_qualities.back()) < 1e-9);
    // Splitting disconnected communities can only help.
    CHECK(modularity(bench.graph, p) >= trace.expanded_quality - 1e-12);
    CHECK(communities_connected(bench.graph, p));
    CHECK(p.caches_consistent(bench.graph));
  }
}

TEST_CASE("planted communities are recovered on a clear benchmark") {
  const GenOutput bench = small_benchmark(0.2, 5);
  DetectConfig cfg;
  cfg.seed = 5;
  const DetectResult result = detect(bench.graph, cfg);
  std::vector<std::int64_t> found(result.partition.assignment().begin(), result.partition.assignment().end());
  CHECK(adjusted_mutual_information(bench.planted, found) >= 0.9);
}

TEST_CASE("relabelling nodes permutes the result") {
  const GenOutput bench = small_benchmark(0.4, 12);
  const Graph& g = bench.graph;
  Rng rng(8);
  std::vector<NodeId> perm(g.num_nodes());
  std::iota(perm.begin(), perm.end(), NodeId{0});
  rng.shuffle(std::span<NodeId>(perm));
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  const Graph h = Graph::from_edges(g.num_nodes(), edges);

  DetectConfig cfg;
  cfg.seed = 31;
  cfg.restarts = 4;
  const DetectResult original = detect(g, cfg);
  cfg.node_rank.resize(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) cfg.node_rank[perm[v]] = v;
  const DetectResult permuted = detect(h, cfg);

  CHECK(std::abs(original.quality - permuted.quality) < 1e-12);
  CHECK(sorted_sizes(original.partition) == sorted_sizes(permuted.partition));
  std::map<CommunityId, CommunityId> rename;
  bool consistent = true;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto [it, inserted] = rename.try_emplace(original.partition.community(v), permuted.partition.community(perm[v]));
    if (it->second != permuted.partition.community(perm[v])) consistent = false;
  }
  CHECK(consistent);
}

TEST_CASE("higher resolution gives more communities") {
  const GenOutput bench = small_benchmark(0.3, 4);
  DetectConfig cfg;
  cfg.restarts = 3;
  cfg.resolution = 0.2;
  const auto coarse = detect(bench.graph, cfg).partition.num_communities();
  cfg.resolution = 4.0;
  const auto fine = detect(bench.graph, cfg).partition.num_communities();
  CHECK(coarse < fine);
}

TEST_CASE("configuration errors") {
  const Graph g = two_cliques();
  DetectConfig cfg;
  cfg.resolution = 0.0;
  CHECK_THROWS_AS(detect(g, cfg), ParameterError);
  cfg = {};
  cfg.restarts = 0;
  CHECK_THROWS_AS(detect(g, cfg), ParameterError);
  cfg = {};
  cfg.node_rank = {0, 0, 1, 2, 3, 4, 5, 6, 7, 8};
  CHECK_THROWS_AS(detect(g, cfg), ParameterError);
  CHECK_THROWS_AS(detect(Graph{}, DetectConfig{}), InputError);
}

TEST_CASE("best partition selection prefers the lowest index on ties") {
  const Graph g = two_cliques();
  const std::vector<std::int64_t> halves = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  const std::vector<Partition> candidates = {Partition::whole(g), Partition::from_labels(g, halves),
                                             Partition::from_labels(g, halves), Partition::singletons(g)};
  CHECK(best_partition_index(g, candidates, 1.0) == 1);
  CHECK(&best_partition_of(g, candidates, 1.0) == &candidates[1]);
  CHECK_THROWS_AS(best_partition_index(g, std::span<const Partition>{}, 1.0), std::invalid_argument);
}
