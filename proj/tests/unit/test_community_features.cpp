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
#include <cmath>
#include <numeric>
#include <set>

#include "commfeat/community_features.hpp"
#include "commfeat/error.hpp"
#include "commfeat/modularity.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace commfeat;
using namespace commfeat::testing;

namespace {

std::vector<double> expand(const SparseDistribution& sparse, std::size_t l) {
  std::vector<double> dense(l, 0.0);
  for (auto [c, prob] : sparse) dense[c] = prob;
  return dense;
}

double total(const SparseDistribution& d) {
  double s = 0.0;
  for (auto [c, prob] : d) s += prob;
  return s;
}

void check_close(const Distances& got, const DenseDistances& want, double tol) {
  CHECK(std::abs(got.l1 - want.l1) <= tol);
  CHECK(std::abs(got.l2 - want.l2) <= tol);
  CHECK(std::abs(got.kl - want.kl) <= tol);
  CHECK(std::abs(got.hellinger - want.hellinger) <= tol);
}

}  // namespace

TEST_CASE("profile of small fixtures") {
  const Graph triangle = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const CommunityProfile whole = CommunityProfile::build(triangle, Partition::whole(triangle));
  for (NodeId v = 0; v < 3; ++v) {
    REQUIRE(whole.entries(v).size() == 1);
    CHECK(whole.entries(v)[0].community == 0);
    CHECK(whole.entries(v)[0].count == 2);
  }
  const Graph g = two_triangles();
  const std::vector<std::int64_t> halves = {0, 0, 0, 1, 1, 1};
  const Partition p = Partition::from_labels(g, halves);
  const CommunityProfile profile = CommunityProfile::build(g, p);
  const auto bridge = profile.entries(2);
  REQUIRE(bridge.size() == 2);
  CHECK(bridge[0].community == 0);
  CHECK(bridge[0].count == 2);
  CHECK(bridge[1].community == 1);
  CHECK(bridge[1].count == 1);
  CHECK(profile.own_count(2) == 2);
  CHECK(profile.volume_square_sum() == 98);
  CHECK(profile.null_share(0) == 0.5);
}

TEST_CASE("profile matches a dense tally") {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = random_sparse_graph(40, 100, rng);
    const Partition p = random_partition(g, 1 + rng.below(10), rng);
    const CommunityProfile profile = CommunityProfile::build(g, p);
    const auto dense = dense_counts(g, p);
    double null_sum = 0.0;
    for (CommunityId c = 0; c < p.num_communities(); ++c) {
      CHECK(profile.null_share(c) > 0.0);
      null_sum += profile.null_share(c);
    }
    CHECK(std::abs(null_sum - 1.0) < 1e-12);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      std::vector<double> row(p.num_communities(), 0.0);
      std::uint32_t degree_sum = 0;
      for (const auto& e : profile.entries(v)) {
        CHECK(e.count > 0);
        row[e.community] = e.count;
        degree_sum += e.count;
      }
      CHECK(row == dense[v]);
      CHECK(degree_sum == g.degree(v));
      CHECK(profile.own_count(v) == dense[v][p.community(v)]);
    }
  }
}

TEST_CASE("hand-computed features on two triangles") {
  const Graph g = two_triangles();
  const std::vector<std::int64_t> halves = {0, 0, 0, 1, 1, 1};
  const Partition p = Partition::from_labels(g, halves);
  const CommunityFeatures f(g, p);
  CHECK(f.cada(2) == 1.5);
  CHECK(f.cada_norm(2) == doctest::Approx(2.0 / 3.0));
  CHECK(f.cpc(2) == doctest::Approx(4.0 / 9.0));
  CHECK(f.cas(2) == doctest::Approx(16.0 / 21.0));
  CHECK(f.cada(0) == 1.0);
  CHECK(f.cada_norm(0) == 1.0);
  CHECK(f.cpc(0) == 0.0);
  CHECK(f.wmd(0) == 0.0);
  // Own degrees in {0,1,2} are 2, 2, 2: zero spread gives zero scores.
  CHECK(f.wmd(2) == 0.0);

  const Distances d = f.depth1(2);
  CHECK(d.l1 == doctest::Approx(1.0 / 3.0));
  CHECK(d.l2 == doctest::Approx(std::sqrt(1.0 / 18.0)));
  CHECK(d.kl == doctest::Approx(2.0 / 3.0 * std::log(4.0 / 3.0) + 1.0 / 3.0 * std::log(2.0 / 3.0)));
  CHECK(d.hellinger == doctest::Approx(std::sqrt(1.0 - std::sqrt(1.0 / 3.0) - std::sqrt(1.0 / 6.0))));

  // q2(0) averages q1 over neighbours 1 and 2: (1 + 2/3) / 2 and (0 + 1/3) / 2.
  const auto q2 = f.q2_vector(0);
  REQUIRE(q2.size() == 2);
  CHECK(q2[0].second == doctest::Approx(5.0 / 6.0));
  CHECK(q2[1].second == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("within-module degree z-score") {
  // Community {0,1,2,3}: a star around 0 plus edge 1-2; own degrees 3,2,2,1.
  const Graph g = make_graph(6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {3, 4}, {4, 5}});
  const std::vector<std::int64_t> labels = {0, 0, 0, 0, 1, 1};
  const Partition p = Partition::from_labels(g, labels);
  const CommunityFeatures f(g, p);
  const double sd = std::sqrt(0.5);
  CHECK(f.wmd(0) == doctest::Approx(1.0 / sd));
  CHECK(f.wmd(1) == 0.0);
  CHECK(f.wmd(3) == doctest::Approx(-1.0 / sd));
}

TEST_CASE("distances for a three-to-one split against an even null") {
  // Node 0 has three neighbours in A = {0,1,2,3} and one in B = {4..7};
  // vol(A) = vol(B) = 7.
  const Graph g = make_graph(8, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {4, 5}, {5, 6}, {6, 7}});
  const std::vector<std::int64_t> labels = {0, 0, 0, 0, 1, 1, 1, 1};
  const Partition p = Partition::from_labels(g, labels);
  const CommunityFeatures f(g, p);
  const Distances d = f.depth1(0);
  CHECK(d.l1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.l2 == doctest::Approx(0.353553).epsilon(1e-6));
  CHECK(d.kl == doctest::Approx(0.130812).epsilon(1e-6));
  CHECK(d.hellinger == doctest::Approx(0.1845919112825145).epsilon(1e-12));
  // The complement form agrees with one minus the Bhattacharyya coefficient.
  const double bc = std::sqrt(0.75 * 0.5) + std::sqrt(0.25 * 0.5);
  CHECK(std::abs(d.hellinger * d.hellinger - (1.0 - bc)) < 1e-15);
}

TEST_CASE("null fixed point gives zero distances") {
  // 4-cycle split into two halves of equal volume: every q1 equals the null.
  const Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const std::vector<std::int64_t> labels = {0, 0, 1, 1};
  const Partition p = Partition::from_labels(g, labels);
  const CommunityFeatures f(g, p);
  for (NodeId v = 0; v < 4; ++v) {
    for (const Distances& d : {f.depth1(v), f.depth2(v)}) {
      CHECK(std::abs(d.l1) < 1e-15);
      CHECK(std::abs(d.l2) < 1e-15);
      CHECK(std::abs(d.kl) < 1e-15);
      CHECK(std::abs(d.hellinger) < 1e-15);
    }
  }
}

TEST_CASE("sparse distances match the dense oracle") {
  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = random_sparse_graph(60, 150 + 10 * trial, rng);
    const Partition p = random_partition(g, 1 + rng.below(30), rng);
    const CommunityFeatures f(g, p);
    const DenseProfile dense = dense_profile(g, p);
    Depth2Workspace ws(p.num_communities());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      const auto q1 = f.q1_vector(v);
      const auto q2 = f.q2_vector(v, ws);
      for (std::size_t c = 0; c < p.num_communities(); ++c) {
        CHECK(std::abs(expand(q1, p.num_communities())[c] - dense.q1[v][c]) < 1e-15);
        CHECK(std::abs(expand(q2, p.num_communities())[c] - dense.q2[v][c]) < 1e-15);
      }
      check_close(f.depth1(v), dense_distances(dense.q1[v], dense.null), 1e-12);
      check_close(f.depth2(v, ws), dense_distances(dense.q2[v], dense.null), 1e-12);
    }
  }
}

TEST_CASE("feature ranges and stochasticity on random instances") {
  Rng rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = random_sparse_graph(80, 250, rng);
    const Partition p = random_partition(g, 1 + rng.below(15), rng);
    const CommunityFeatures f(g, p);
    const double l = static_cast<double>(p.num_communities());
    std::size_t max_degree = 0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) max_degree = std::max(max_degree, g.degree(v));
    const FeatureMatrix m = f.compute_all();
    CHECK(m.all_finite());
    CHECK(m.rows() == g.num_nodes());
    CHECK(m.cols() == kCommunityFeatureNames.size());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      CHECK(f.cada(v) >= 1.0);
      CHECK(f.cada(v) <= static_cast<double>(max_degree));
      CHECK(f.cada_norm(v) >= 0.0);
      CHECK(f.cada_norm(v) <= 1.0);
      CHECK(f.cpc(v) >= 0.0);
      CHECK(f.cpc(v) <= 1.0 - 1.0 / l + 1e-12);
      CHECK(std::abs(total(f.q1_vector(v)) - 1.0) < 1e-12);
      CHECK(std::abs(total(f.q2_vector(v)) - 1.0) < 1e-12);
      for (const Distances& d : {f.depth1(v), f.depth2(v)}) {
        CHECK(d.l1 >= 0.0);
        CHECK(d.l1 <= 2.0 + 1e-12);
        CHECK(d.l2 >= 0.0);
        CHECK(d.kl >= 0.0);
        CHECK(d.hellinger >= 0.0);
        CHECK(d.hellinger <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("CAS is the singleton-move threshold") {
  Rng rng(44);
  std::size_t checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = random_sparse_graph(30, 80, rng);
    const Partition p = random_partition(g, 1 + rng.below(6), rng);
    const double lambda = 0.1 + 3.0 * rng.uniform();
    const CommunityFeatures f(g, p, lambda);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      if (p.size(p.community(v)) < 2) continue;
      const double beta = f.cas(v);
      const double diff = move_gain_edge_contribution(g, p, v, beta) - move_gain_degree_tax(g, p, v, lambda);
      CHECK(std::abs(diff) < 1e-9);
      // Slightly above the threshold the move pays off, slightly below it does not.
      CHECK(move_gain_edge_contribution(g, p, v, beta + 1e-3) > move_gain_degree_tax(g, p, v, lambda));
      CHECK(move_gain_edge_contribution(g, p, v, beta - 1e-3) < move_gain_degree_tax(g, p, v, lambda));
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("karate: the weakest-associated nodes are 3 and 10") {
  const Graph g = load_karate();
  const Partition p = karate_factions(g);
  const CommunityFeatures f(g, p);
  double lowest = f.cas(0);
  for (NodeId v = 1; v < g.num_nodes(); ++v) lowest = std::min(lowest, f.cas(v));
  std::vector<std::pair<double, std::string>> ranked;
  for (NodeId v = 0; v < g.num_nodes(); ++v) ranked.emplace_back(f.cas(v), g.label(v));
  std::sort(ranked.begin(), ranked.end());
  std::set<std::string> two_lowest = {ranked[0].second, ranked[1].second};
  CHECK(two_lowest == std::set<std::string>{"3", "10"});
  CHECK(ranked[2].first > ranked[1].first);
  CHECK(ranked[0].first == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ranked[1].first == doctest::Approx(2.0 / 13.0));
}

TEST_CASE("relabelling nodes and communities permutes rows") {
  Rng rng(45);
  const Graph g = random_sparse_graph(70, 220, rng);
  const Partition p = random_partition(g, 9, rng);
  std::vector<NodeId> perm(g.num_nodes());
  std::iota(perm.begin(), perm.end(), NodeId{0});
  rng.shuffle(std::span<NodeId>(perm));
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  const Graph h = Graph::from_edges(g.num_nodes(), edges);
  std::vector<std::int64_t> labels(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) labels[perm[v]] = 100 - static_cast<std::int64_t>(p.community(v));
  const Partition q = Partition::from_labels(h, labels);

  const FeatureMatrix a = compute_community_features(g, p);
  const FeatureMatrix b = compute_community_features(h, q);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    for (std::size_t c = 0; c < a.cols(); ++c) CHECK(std::abs(a.at(v, c) - b.at(perm[v], c)) < 1e-12);
  }
}

TEST_CASE("output does not depend on the thread count") {
  Rng rng(46);
  const Graph g = random_sparse_graph(500, 3000, rng);
  const Partition p = random_partition(g, 20, rng);
  const CommunityFeatures f(g, p);
  const FeatureMatrix one = f.compute_all(1);
  const FeatureMatrix four = f.compute_all(4);
  for (std::size_t r = 0; r < one.rows(); ++r) {
    for (std::size_t c = 0; c < one.cols(); ++c) REQUIRE(one.at(r, c) == four.at(r, c));
  }
}

TEST_CASE("singleton communities") {
  const Graph g = two_triangles();
  const std::vector<std::int64_t> labels = {0, 0, -1, 1, 1, 1};
  const Partition p = Partition::from_labels(g, labels);
  const CommunityFeatures f(g, p);
  CHECK(f.cada_norm(2) == 0.0);
  CHECK(f.cas(2) == 0.0);
  CHECK(f.wmd(2) == 0.0);
  CHECK(compute_community_features(g, p).all_finite());
  CHECK_THROWS_AS(CommunityFeatures(g, p, 0.0), ParameterError);
}
