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
#include <span>
#include <vector>

#include "commfeat/graph.hpp"
#include "commfeat/partition.hpp"

namespace commfeat {

struct DetectConfig {
  double resolution = 1.0;
  std::size_t restarts = 16;
  std::uint64_t seed = 0;
  std::size_t max_levels = 20;
  double min_gain = 1e-12;
  std::size_t threads = 1;
  /// Optional processing position per node (a permutation of 0..n-1). Runs
  /// are defined on nodes in this order, so a relabelled copy of a graph
  /// given the matching ranks reproduces the same communities. Empty means
  /// identity.
  std::vector<NodeId> node_rank;
};

/// Per-run record of the objective, used to check monotonicity.
struct RunTrace {
  /// Objective after every local-moving sweep, all levels concatenated.
  std::vector<double> sweep_qualities;
  /// Objective at the end of every level, measured on that level's
  /// aggregated graph.
  std::vector<double> level_qualities;
  /// Objective of the expanded partition on the input graph, before
  /// disconnected communities are split.
  double expanded_quality = 0.0;
  std::size_t split_communities = 0;
};

struct DetectResult {
  Partition partition;
  double quality = 0.0;
  std::size_t best_restart = 0;
  std::vector<double> restart_qualities;
};

/// Best of `restarts` independent move-and-aggregate runs maximising the
/// resolution-scaled modularity. Run r draws from seed + r; the result does
/// not depend on cfg.threads.
DetectResult detect(const Graph& g, const DetectConfig& cfg);

/// A single run with the given seed, optionally recording its trace.
Partition detect_once(const Graph& g, const DetectConfig& cfg, std::uint64_t seed,
                      RunTrace* trace = nullptr);

/// Index of the candidate with the highest resolution-scaled modularity;
/// ties go to the lowest index. Throws std::invalid_argument when empty.
std::size_t best_partition_index(const Graph& g, std::span<const Partition> candidates,
                                 double resolution);

const Partition& best_partition_of(const Graph& g, std::span<const Partition> candidates,
                                   double resolution);

}  // namespace commfeat
