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

#include "commfeat/graph.hpp"
#include "commfeat/partition.hpp"

namespace commfeat {

/// Newman-Girvan modularity: edge contribution minus degree tax.
double modularity(const Graph& g, const Partition& p);

/// Modularity with the degree tax scaled by `resolution` (> 0).
double generalized_modularity(const Graph& g, const Partition& p, double resolution);

/// Modularity that rewards singleton communities. Each singleton {v} gets
/// beta * deg(v) / 2 extra internal edges and its volume is inflated by
/// (1 + beta); both normalisers grow by Z = beta * vol(singletons).
/// Reduces to generalized_modularity when beta == 0 or when there are no
/// singletons.
double regularized_modularity(const Graph& g, const Partition& p, double resolution, double beta);

/// Change of the (approximate) regularized edge contribution when v leaves
/// its non-singleton community for a new singleton:
/// (-2 deg_in(v) + beta deg(v)) / vol(V).
double move_gain_edge_contribution(const Graph& g, const Partition& p, NodeId v, double beta);

/// Change of resolution * sum (vol/vol(V))^2 for the same move:
/// -2 resolution (vol(A) deg(v) - deg(v)^2) / vol(V)^2. The move pays off
/// once the edge gain exceeds this value.
double move_gain_degree_tax(const Graph& g, const Partition& p, NodeId v, double resolution);

}  // namespace commfeat
