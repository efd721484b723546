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

#include "commfeat/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "commfeat/error.hpp"

namespace commfeat {

namespace {

// Discrete power law P(k) ~ k^-exponent on [lo, hi], inverted by table.
class PowerLaw {
 public:
  PowerLaw(double exponent, std::size_t lo, std::size_t hi) : lo_(lo) {
    cdf_.reserve(hi - lo + 1);
    double total = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
      total += std::pow(static_cast<double>(k), -exponent);
      cdf_.push_back(total);
    }
    for (auto& c : cdf_) c /= total;
  }

  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto index = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    return lo_ + index;
  }

 private:
  std::size_t lo_;
  std::vector<double> cdf_;
};

// Fenwick tree over nonnegative integer weights with weighted lookup.
class WeightTree {
 public:
  explicit WeightTree(std::size_t n) : tree_(n + 1, 0) {}

  void add(std::size_t i, std::int64_t delta) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }

  std::int64_t prefix(std::size_t count) const {
    std::int64_t sum = 0;
    for (std::size_t i = count; i > 0; i -= i & (~i + 1)) sum += tree_[i];
    return sum;
  }

  // Smallest index whose inclusive prefix sum exceeds target.
  std::size_t find(std::int64_t target) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<std::int64_t> tree_;
};

std::uint64_t edge_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

struct PairingLosses {
  std::size_t rewired = 0;
  std::size_t self_loops = 0;
  std::size_t multi_edges = 0;
};

// Pairs consecutive stubs. A pair that would be a loop or repeat an edge is
// swapped against a random accepted pair of the same batch, which keeps
// every node's stub count; pairs that still fail after a few tries are
// dropped.
void pair_stubs(std::span<const NodeId> stubs, std::unordered_set<std::uint64_t>& present,
                std::vector<Edge>& edges, Rng& rng, PairingLosses& losses) {
  constexpr int kTries = 32;
  const std::size_t first = edges.size();
  std::vector<Edge> bad;
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    const NodeId a = stubs[i];
    const NodeId b = stubs[i + 1];
    if (a != b && present.insert(edge_key(a, b)).second) {
      edges.emplace_back(a, b);
    } else {
      bad.emplace_back(a, b);
    }
  }
  for (auto [a, b] : bad) {
    bool fixed = false;
    for (int t = 0; t < kTries && edges.size() > first; ++t) {
      const std::size_t j = first + rng.below(edges.size() - first);
      auto [c, d] = edges[j];
      if (rng.below(2)) std::swap(c, d);
      if (a == c || b == d) continue;
      const std::uint64_t ac = edge_key(a, c);
      const std::uint64_t bd = edge_key(b, d);
      if (ac == bd || present.count(ac) || present.count(bd)) continue;
      present.erase(edge_key(c, d));
      present.insert(ac);
      present.insert(bd);
      edges[j] = {a, c};
      edges.emplace_back(b, d);
      fixed = true;
      break;
    }
    if (fixed) {
      ++losses.rewired;
    } else if (a == b) {
      ++losses.self_loops;
    } else {
      ++losses.multi_edges;
    }
  }
}

// Background edges land in a node's own community with probability about
// phi = its share of the external pool, so the realised internal fraction
// is 1 - xi' (1 - phi). Solves xi' (1 - phi(xi')) = xi, assuming degrees
// independent of community.
double effective_xi(double xi, const std::vector<std::size_t>& sizes, std::size_t outliers) {
  if (xi <= 0.0) return 0.0;
  double members = 0.0;
  double square_sum = 0.0;
  for (std::size_t s : sizes) {
    members += static_cast<double>(s);
    square_sum += static_cast<double>(s) * static_cast<double>(s);
  }
  const double out = static_cast<double>(outliers);
  double adjusted = xi;
  for (int i = 0; i < 50; ++i) {
    const double phi = square_sum * adjusted / (members * (members * adjusted + out));
    adjusted = std::min(1.0, xi / (1.0 - phi));
  }
  return adjusted;
}

}  // namespace

void validate(const GenSpec& spec) {
  auto fail = [](const std::string& msg) { throw ParameterError(msg); };
  if (spec.n < 2) fail("n must be at least 2");
  if (spec.outliers >= spec.n) fail("outlier count must be below n");
  if (spec.min_degree < 1) fail("minimum degree must be at least 1");
  if (spec.min_degree > spec.max_degree) fail("minimum degree exceeds maximum degree");
  if (spec.max_degree >= spec.n) fail("maximum degree must be below n");
  if (spec.min_size < 1) fail("minimum community size must be at least 1");
  if (spec.min_size > spec.max_size) fail("minimum community size exceeds maximum");
  const std::size_t members = spec.n - spec.outliers;
  if (spec.max_size > members) fail("maximum community size exceeds the number of non-outliers");
  if (!(spec.xi >= 0.0 && spec.xi <= 1.0)) fail("xi must lie in [0, 1]");
  if (!std::isfinite(spec.degree_exponent) || !std::isfinite(spec.size_exponent)) fail("exponents must be finite");
  // Some count k of communities must satisfy k * min <= members <= k * max.
  const std::size_t fewest = (members + spec.max_size - 1) / spec.max_size;
  const std::size_t most = members / spec.min_size;
  if (fewest > most) {
    fail("community sizes in [" + std::to_string(spec.min_size) + ", " + std::to_string(spec.max_size) +
         "] cannot cover " + std::to_string(members) + " non-outliers");
  }
}

std::vector<std::size_t> sample_community_sizes(std::size_t total, double exponent, std::size_t lo,
                                                std::size_t hi, Rng& rng) {
  const PowerLaw law(exponent, lo, hi);
  std::vector<std::size_t> sizes;
  std::size_t sum = 0;
  while (sum < total) {
    sizes.push_back(law(rng));
    sum += sizes.back();
  }
  std::size_t remainder = sizes.back() - (sum - total);
  sizes.pop_back();
  if (remainder >= lo) {
    sizes.push_back(remainder);
    return sizes;
  }
  // Spread the short remainder over communities with room.
  for (std::size_t i = 0; remainder > 0 && i < sizes.size() * hi; ++i) {
    auto& s = sizes[i % sizes.size()];
    if (s < hi) {
      ++s;
      --remainder;
    }
  }
  if (remainder > 0) {
    // Everyone is full: grow the remainder into a community by borrowing.
    std::size_t need = lo - remainder;
    for (std::size_t i = 0; need > 0 && i < sizes.size() * hi; ++i) {
      auto& s = sizes[i % sizes.size()];
      if (s > lo) {
        --s;
        --need;
      }
    }
    if (need > 0) throw ParameterError("community size bounds cannot tile the non-outliers");
    sizes.push_back(lo);
  }
  return sizes;
}

GenOutput generate(const GenSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const std::size_t n = spec.n;

  std::vector<std::size_t> sizes =
      sample_community_sizes(n - spec.outliers, spec.size_exponent, spec.min_size, spec.max_size, rng);
  const std::size_t num_comms = sizes.size();

  const PowerLaw degree_law(spec.degree_exponent, spec.min_degree, spec.max_degree);
  std::vector<std::size_t> degree(n);
  for (auto& d : degree) d = degree_law(rng);

  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  for (std::size_t i = 0; i < spec.outliers; ++i) std::swap(nodes[i], nodes[i + rng.below(n - i)]);
  constexpr std::int64_t kOutlier = -1;
  std::vector<std::int64_t> planted(n, kOutlier);

  const double xi = effective_xi(spec.xi, sizes, spec.outliers);
  std::vector<std::size_t> internal(n, 0);
  for (std::size_t i = spec.outliers; i < n; ++i) {
    const NodeId v = nodes[i];
    // Randomised rounding keeps the expected internal share at 1 - xi even
    // for small degrees.
    const double target = (1.0 - xi) * static_cast<double>(degree[v]);
    const double floor = std::floor(target);
    internal[v] = static_cast<std::size_t>(floor) + (rng.uniform() < target - floor ? 1 : 0);
  }

  // High-degree members go first and only into communities big enough to
  // hold their internal stubs, chosen with probability ~ remaining room.
  std::vector<NodeId> members(nodes.begin() + static_cast<std::ptrdiff_t>(spec.outliers), nodes.end());
  std::stable_sort(members.begin(), members.end(), [&](NodeId a, NodeId b) {
    return degree[a] != degree[b] ? degree[a] > degree[b] : a < b;
  });
  std::vector<std::size_t> by_size(num_comms);
  std::iota(by_size.begin(), by_size.end(), std::size_t{0});
  std::stable_sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
  WeightTree room(num_comms);
  for (std::size_t r = 0; r < num_comms; ++r) room.add(r, static_cast<std::int64_t>(sizes[by_size[r]]));
  for (NodeId v : members) {
    // Communities in by_size order with size - 1 >= internal[v] form a prefix.
    const auto fits = static_cast<std::size_t>(
        std::partition_point(by_size.begin(), by_size.end(),
                             [&](std::size_t c) { return sizes[c] >= internal[v] + 1; }) -
        by_size.begin());
    std::int64_t weight = room.prefix(fits);
    if (weight == 0) weight = room.prefix(num_comms);
    const std::size_t r = room.find(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(weight))));
    room.add(r, -1);
    planted[v] = static_cast<std::int64_t>(by_size[r]);
  }

  GenReport report;
  report.communities = num_comms;
  std::vector<std::vector<NodeId>> community_members(num_comms);
  for (NodeId v = 0; v < n; ++v) {
    report.target_volume += degree[v];
    if (planted[v] >= 0) community_members[static_cast<std::size_t>(planted[v])].push_back(v);
  }

  std::vector<Edge> edges;
  std::vector<NodeId> stubs;
  std::unordered_set<std::uint64_t> present;
  PairingLosses losses;
  for (auto& group : community_members) {
    std::size_t total = 0;
    for (NodeId v : group) total += internal[v];
    if (total % 2 == 1) {
      std::vector<NodeId> holders;
      for (NodeId v : group) {
        if (internal[v] > 0) holders.push_back(v);
      }
      const NodeId v = holders[rng.below(holders.size())];
      --internal[v];
      --degree[v];
      ++report.internal_parity_drops;
    }
    stubs.clear();
    for (NodeId v : group) stubs.insert(stubs.end(), internal[v], v);
    rng.shuffle(std::span<NodeId>(stubs));
    pair_stubs(stubs, present, edges, rng, losses);
  }

  stubs.clear();
  for (NodeId v = 0; v < n; ++v) stubs.insert(stubs.end(), degree[v] - internal[v], v);
  if (stubs.size() % 2 == 1) {
    const std::size_t drop = rng.below(stubs.size());
    stubs.erase(stubs.begin() + static_cast<std::ptrdiff_t>(drop));
    ++report.external_parity_drops;
  }
  rng.shuffle(std::span<NodeId>(stubs));
  pair_stubs(stubs, present, edges, rng, losses);

  report.rewired_pairs = losses.rewired;
  report.self_loops = losses.self_loops;
  report.multi_edges = losses.multi_edges;

  // Drop isolated nodes and compact ids so labels "0".."n'-1" match
  // internal ids.
  CleaningReport cleaning;
  std::vector<NodeId> kept;
  const Graph raw = Graph::from_edges(n, edges, {}, &cleaning, &kept);
  GenOutput out;
  out.graph = Graph::from_edges(raw.num_nodes(), raw.edges());
  report.isolated_nodes = cleaning.isolated_nodes;
  out.planted.resize(kept.size());
  out.labels.resize(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    out.planted[i] = planted[kept[i]];
    out.labels[i] = planted[kept[i]] < 0 ? 1 : 0;
  }

  report.realized_nodes = out.graph.num_nodes();
  report.realized_edges = out.graph.num_edges();
  double fraction_sum = 0.0;
  std::size_t counted = 0;
  for (NodeId v = 0; v < out.graph.num_nodes(); ++v) {
    if (out.labels[v]) {
      ++report.realized_outliers;
      continue;
    }
    std::size_t inside = 0;
    for (NodeId u : out.graph.neighbors(v)) inside += out.planted[u] == out.planted[v];
    fraction_sum += static_cast<double>(inside) / static_cast<double>(out.graph.degree(v));
    ++counted;
  }
  report.mean_internal_fraction = counted ? fraction_sum / static_cast<double>(counted) : 0.0;
  out.report = report;
  return out;
}

}  // namespace commfeat
