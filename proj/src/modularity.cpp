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

#include "commfeat/modularity.hpp"

#include <cmath>
#include <string>

#include "commfeat/error.hpp"

namespace commfeat {

namespace {

void check_resolution(double resolution) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw ParameterError("resolution must be positive, got " + std::to_string(resolution));
  }
}

void check_partition(const Graph& g, const Partition& p) {
  if (p.num_nodes() != g.num_nodes()) throw InputError("partition does not match graph size");
}

CommunityId checked_community(const Graph& g, const Partition& p, NodeId v) {
  check_partition(g, p);
  if (v >= g.num_nodes()) throw std::out_of_range("node id out of range");
  const CommunityId c = p.community(v);
  if (p.size(c) == 1) throw std::logic_error("node " + std::to_string(v) + " is already a singleton");
  return c;
}

}  // namespace

double modularity(const Graph& g, const Partition& p) {
  return generalized_modularity(g, p, 1.0);
}

double generalized_modularity(const Graph& g, const Partition& p, double resolution) {
  check_resolution(resolution);
  check_partition(g, p);
  const double m = static_cast<double>(g.num_edges());
  const double total = static_cast<double>(g.total_volume());
  std::uint64_t internal = 0;
  double tax = 0.0;
  for (CommunityId c = 0; c < p.num_communities(); ++c) {
    internal += p.internal_edges(c);
    const double share = static_cast<double>(p.volume(c)) / total;
    tax += share * share;
  }
  return static_cast<double>(internal) / m - resolution * tax;
}

double regularized_modularity(const Graph& g, const Partition& p, double resolution, double beta) {
  check_resolution(resolution);
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be nonnegative");
  check_partition(g, p);
  std::uint64_t outlier_volume = 0;
  for (CommunityId c = 0; c < p.num_communities(); ++c) {
    if (p.size(c) == 1) outlier_volume += p.volume(c);
  }
  const double z = beta * static_cast<double>(outlier_volume);
  const double edge_norm = static_cast<double>(g.num_edges()) + z / 2.0;
  const double volume_norm = static_cast<double>(g.total_volume()) + z;
  double edges = 0.0;
  double tax = 0.0;
  for (CommunityId c = 0; c < p.num_communities(); ++c) {
    const bool singleton = p.size(c) == 1;
    const double vol = static_cast<double>(p.volume(c));
    edges += static_cast<double>(p.internal_edges(c)) + (singleton ? beta * vol / 2.0 : 0.0);
    const double share = vol * (1.0 + (singleton ? beta : 0.0)) / volume_norm;
    tax += share * share;
  }
  return edges / edge_norm - resolution * tax;
}

double move_gain_edge_contribution(const Graph& g, const Partition& p, NodeId v, double beta) {
  const CommunityId c = checked_community(g, p, v);
  const double inside = static_cast<double>(p.degree_into(g, v, c));
  const double deg = static_cast<double>(g.degree(v));
  return (-2.0 * inside + beta * deg) / static_cast<double>(g.total_volume());
}

double move_gain_degree_tax(const Graph& g, const Partition& p, NodeId v, double resolution) {
  check_resolution(resolution);
  const CommunityId c = checked_community(g, p, v);
  const double deg = static_cast<double>(g.degree(v));
  const double total = static_cast<double>(g.total_volume());
  return -2.0 * resolution * (static_cast<double>(p.volume(c)) * deg - deg * deg) / (total * total);
}

}  // namespace commfeat
