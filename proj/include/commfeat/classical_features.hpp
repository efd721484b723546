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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "commfeat/feature_matrix.hpp"
#include "commfeat/graph.hpp"

namespace commfeat {

inline constexpr std::array<std::string_view, 8> kClassicalFeatureNames = {
    "lcc", "bc", "cc", "dc", "ndc", "ec", "eccen", "core"};

struct ClassicalSpec {
  /// Subset of kClassicalFeatureNames; output keeps the canonical order.
  std::set<std::string> enabled{kClassicalFeatureNames.begin(), kClassicalFeatureNames.end()};
  double ec_tolerance = 1e-10;
  std::size_t ec_max_iter = 1000;
  /// On a disconnected graph, compute cc and eccen within each component
  /// instead of failing.
  bool per_component = false;
  /// When set, betweenness is estimated from this many uniformly drawn
  /// source pivots and scaled by n / K (approximate).
  std::optional<std::size_t> bc_sample;
  std::uint64_t bc_seed = 0;
  std::size_t threads = 1;
};

/// Triangles through v over deg(v) choose 2; 0 when deg(v) < 2.
std::vector<double> local_clustering(const Graph& g, std::size_t threads = 1);

/// deg(v) / (n - 1).
std::vector<double> degree_centrality(const Graph& g);

/// Mean degree centrality of the neighbours.
std::vector<double> neighbor_degree_centrality(const Graph& g);

/// Largest k such that v belongs to the k-core (peeling).
std::vector<std::uint32_t> core_numbers(const Graph& g);

/// Power iteration on A + I from the all-ones vector, max-normalised.
/// `iterations`, if given, receives the number of steps taken.
std::vector<double> eigenvector_centrality(const Graph& g, double tolerance = 1e-10,
                                           std::size_t max_iter = 1000, std::size_t* iterations = nullptr);

/// Shortest-path based columns computed from one BFS per source.
struct PathCentralities {
  /// Brandes betweenness, unnormalised (each unordered pair counted once).
  std::vector<double> betweenness_raw;
  /// Betweenness times 2 / ((n - 1)(n - 2)).
  std::vector<double> betweenness;
  /// (|C| - 1) / sum of distances within the node's component C.
  std::vector<double> closeness;
  /// Largest distance within the node's component.
  std::vector<std::uint32_t> eccentricity;
};

struct PathOptions {
  bool betweenness = true;
  /// Closeness and eccentricity need a BFS from every node.
  bool distances = true;
  std::optional<std::size_t> bc_sample;
  std::uint64_t bc_seed = 0;
  std::size_t threads = 1;
};

/// One BFS per source; betweenness via Brandes' dependency accumulation,
/// exact unless bc_sample is set. Sources are reduced in fixed blocks so
/// the result does not depend on `threads`. Columns not requested are left
/// empty. Distances are per connected component.
PathCentralities path_centralities(const Graph& g, const PathOptions& options = {});

/// Enabled columns for every node. Throws InputError on a disconnected
/// graph when cc or eccen is requested and spec.per_component is false.
FeatureMatrix compute_classical_features(const Graph& g, const ClassicalSpec& spec = {});

}  // namespace commfeat
