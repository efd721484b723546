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

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "commfeat/community_features.hpp"
#include "commfeat/error.hpp"
#include "commfeat/generator.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace commfeat;
using namespace commfeat::testing;

namespace {

GenSpec paper_spec(double xi, std::uint64_t seed) {
  GenSpec spec;
  spec.xi = xi;
  spec.seed = seed;
  return spec;
}

GenSpec small_spec(double xi, std::uint64_t seed) {
  GenSpec spec;
  spec.n = 1500;
  spec.outliers = 150;
  spec.max_degree = 60;
  spec.min_size = 30;
  spec.max_size = 300;
  spec.xi = xi;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_NOTHROW(validate(GenSpec{}));
  auto rejects = [](auto tweak) {
    GenSpec spec;
    tweak(spec);
    CHECK_THROWS_AS(validate(spec), ParameterError);
    CHECK_THROWS_AS(generate(spec), ParameterError);
  };
  rejects([](GenSpec& s) { s.outliers = s.n; });
  rejects([](GenSpec& s) { s.min_degree = 0; });
  rejects([](GenSpec& s) { s.min_degree = 600; });
  rejects([](GenSpec& s) { s.max_degree = s.n; });
  rejects([](GenSpec& s) { s.min_size = 3000; });
  rejects([](GenSpec& s) { s.max_size = 9500; });
  rejects([](GenSpec& s) { s.xi = 1.5; });
  rejects([](GenSpec& s) { s.xi = -0.1; });
  rejects([](GenSpec& s) {
    s.n = 100;
    s.outliers = 0;
    s.max_degree = 10;
    s.min_size = 60;
    s.max_size = 70;
  });
}

TEST_CASE("community sizes tile the members within bounds") {
  Rng rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t lo = 1 + rng.below(40);
    const std::size_t hi = lo + rng.below(200);
    const std::size_t total = hi + rng.below(5000);
    if ((total + hi - 1) / hi > total / lo) continue;
    const double exponent = 1.0 + 2.0 * rng.uniform();
    const auto sizes = sample_community_sizes(total, exponent, lo, hi, rng);
    std::size_t sum = 0;
    for (std::size_t s : sizes) {
      CHECK(s >= lo);
      CHECK(s <= hi);
      sum += s;
    }
    CHECK(sum == total);
  }
}

TEST_CASE("generation is deterministic in the seed") {
  const GenOutput a = generate(small_spec(0.3, 5));
  const GenOutput b = generate(small_spec(0.3, 5));
  const GenOutput c = generate(small_spec(0.3, 6));
  std::ostringstream ea;
  std::ostringstream eb;
  write_edge_list(ea, a.graph);
  write_edge_list(eb, b.graph);
  CHECK(ea.str() == eb.str());
  CHECK(a.planted == b.planted);
  CHECK(a.labels == b.labels);
  CHECK(a.graph.edges() != c.graph.edges());
}

TEST_CASE("outlier labels and planted community sizes") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const GenSpec spec = small_spec(0.4, seed);
    const GenOutput out = generate(spec);
    REQUIRE(out.report.isolated_nodes == 0);
    CHECK(out.graph.num_nodes() == spec.n);
    CHECK(out.labels.size() == spec.n);
    CHECK(static_cast<std::size_t>(std::count(out.labels.begin(), out.labels.end(), 1)) == spec.outliers);
    std::map<std::int64_t, std::size_t> sizes;
    for (NodeId v = 0; v < out.graph.num_nodes(); ++v) {
      CHECK((out.labels[v] == 1) == (out.planted[v] < 0));
      CHECK(out.graph.label(v) == std::to_string(v));
      if (out.planted[v] >= 0) ++sizes[out.planted[v]];
    }
    CHECK(sizes.size() == out.report.communities);
    for (auto [c, size] : sizes) {
      CHECK(size >= spec.min_size);
      CHECK(size <= spec.max_size);
    }
  }
}

TEST_CASE("paper-scale benchmark: size, mixing, degrees and outlier wiring") {
  for (double xi : {0.3, 0.4, 0.5, 0.6}) {
    const GenSpec spec = paper_spec(xi, 1);
    const GenOutput out = generate(spec);
    const Graph& g = out.graph;
    CAPTURE(xi);
    CHECK(g.num_nodes() == 10000);
    CHECK(out.report.realized_outliers == 1000);
    CHECK(std::abs(out.report.mean_internal_fraction - (1.0 - xi)) <= 0.03);

    std::size_t min_degree = g.num_nodes();
    std::size_t max_degree = 0;
    double log_sum = 0.0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      min_degree = std::min(min_degree, g.degree(v));
      max_degree = std::max(max_degree, g.degree(v));
    }
    std::size_t tail = 0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      if (g.degree(v) < spec.min_degree) continue;
      log_sum += std::log(static_cast<double>(g.degree(v)) / (static_cast<double>(spec.min_degree) - 0.5));
      ++tail;
    }
    CHECK(min_degree + 1 >= spec.min_degree);
    CHECK(max_degree <= spec.max_degree);
    const double exponent = 1.0 + static_cast<double>(tail) / log_sum;
    CHECK(std::abs(exponent - spec.degree_exponent) <= 0.4);

    // Outlier neighbours spread over communities in proportion to volume.
    std::map<std::int64_t, double> volume;
    std::map<std::int64_t, double> hits;
    double hit_total = 0.0;
    double volume_total = 0.0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      if (out.planted[v] < 0) continue;
      volume[out.planted[v]] += static_cast<double>(g.degree(v));
      volume_total += static_cast<double>(g.degree(v));
      for (NodeId u : g.neighbors(v)) {
        if (out.planted[u] < 0) {
          hits[out.planted[v]] += 1.0;
          hit_total += 1.0;
        }
      }
    }
    double chi2 = 0.0;
    for (auto [c, vol] : volume) {
      const double expected = hit_total * vol / volume_total;
      chi2 += (hits[c] - expected) * (hits[c] - expected) / expected;
    }
    const boost::math::chi_squared dist(static_cast<double>(volume.size() - 1));
    CHECK(boost::math::cdf(boost::math::complement(dist, chi2)) > 0.01);
  }
}

TEST_CASE("no mixing keeps members inside their communities") {
  GenSpec spec = paper_spec(0.0, 3);
  const GenOutput out = generate(spec);
  for (NodeId v = 0; v < out.graph.num_nodes(); ++v) {
    if (out.planted[v] < 0) continue;
    for (NodeId u : out.graph.neighbors(v)) CHECK(out.planted[u] == out.planted[v]);
  }
  const double lost = static_cast<double>(out.report.self_loops + out.report.multi_edges);
  CHECK(lost <= 0.02 * static_cast<double>(out.report.target_volume) / 2.0);
  CHECK(out.report.mean_internal_fraction == 1.0);
}

TEST_CASE("full mixing leaves no community signal") {
  const GenOutput out = generate(paper_spec(1.0, 4));
  const Graph& g = out.graph;
  std::vector<std::int64_t> labels = out.planted;
  const Partition p = Partition::from_labels(g, labels);
  const CommunityFeatures f(g, p);
  double mean = 0.0;
  double expected = 0.0;
  double count = 0.0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (out.labels[v]) continue;
    mean += f.cada_norm(v);
    expected += f.profile().null_share(p.community(v));
    count += 1.0;
  }
  CHECK(std::abs(mean / count - expected / count) <= 0.05);
}
