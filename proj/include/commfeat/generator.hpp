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
#include <vector>

#include "commfeat/graph.hpp"
#include "commfeat/random.hpp"

namespace commfeat {

/// Parameters of the planted-partition benchmark with outliers.
struct GenSpec {
  std::size_t n = 10000;
  std::size_t outliers = 1000;
  double degree_exponent = 2.5;
  std::size_t min_degree = 5;
  std::size_t max_degree = 500;
  double size_exponent = 1.5;
  std::size_t min_size = 50;
  std::size_t max_size = 2000;
  double xi = 0.3;
  std::uint64_t seed = 0;
};

/// Bookkeeping of how the realised graph differs from the sampled targets.
struct GenReport {
  std::uint64_t target_volume = 0;
  std::size_t communities = 0;
  /// Internal stubs dropped to make a community's internal stub count even
  /// (at most one per community).
  std::size_t internal_parity_drops = 0;
  /// External stubs dropped to make the pool even (0 or 1).
  std::size_t external_parity_drops = 0;
  /// Stub pairs that would have been a loop or a repeated edge and were
  /// swapped with another pair of the same batch instead.
  std::size_t rewired_pairs = 0;
  /// Pairs dropped because no valid swap was found.
  std::size_t self_loops = 0;
  std::size_t multi_edges = 0;
  std::size_t isolated_nodes = 0;
  std::size_t realized_nodes = 0;
  std::size_t realized_edges = 0;
  std::size_t realized_outliers = 0;
  /// Mean over non-outliers of the fraction of neighbours inside the own
  /// planted community.
  double mean_internal_fraction = 0.0;
};

struct GenOutput {
  Graph graph;
  /// Planted community per node of `graph`; -1 for outliers.
  std::vector<std::int64_t> planted;
  /// 1 for outliers, 0 otherwise.
  std::vector<std::uint8_t> labels;
  GenReport report;
};

/// Throws ParameterError when the spec is out of domain or the size
/// bounds cannot tile the non-outlier nodes.
void validate(const GenSpec& spec);

/// Deterministic in spec (including the seed).
GenOutput generate(const GenSpec& spec);

/// Sizes in [lo, hi] drawn from a power law with the given exponent until
/// they cover `total` nodes, then adjusted so they sum to exactly `total`
/// with every size still inside the bounds.
std::vector<std::size_t> sample_community_sizes(std::size_t total, double exponent, std::size_t lo,
                                                std::size_t hi, Rng& rng);

}  // namespace commfeat
