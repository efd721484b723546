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

#include "commfeat/classical_features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "commfeat/error.hpp"
#include "commfeat/random.hpp"

namespace commfeat {

std::vector<double> local_clustering(const Graph& g, std::size_t threads) {
  const std::size_t n = g.num_nodes();
  std::vector<double> out(n, 0.0);
  const int workers = static_cast<int>(std::max<std::size_t>(1, threads));
#pragma omp parallel num_threads(workers)
  {
    std::vector<char> mark(n, 0);
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      const auto v = static_cast<NodeId>(i);
      const std::size_t deg = g.degree(v);
      if (deg < 2) continue;
      for (NodeId u : g.neighbors(v)) mark[u] = 1;
      std::uint64_t closed = 0;
      for (NodeId u : g.neighbors(v)) {
        for (NodeId w : g.neighbors(u)) closed += mark[w];
      }
      for (NodeId u : g.neighbors(v)) mark[u] = 0;
      // Each triangle is seen from both of its other corners.
      out[v] = static_cast<double>(closed) / static_cast<double>(deg * (deg - 1));
    }
  }
  return out;
}

std::vector<double> degree_centrality(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  for (NodeId v = 0; v < n; ++v) out[v] = static_cast<double>(g.degree(v)) / static_cast<double>(n - 1);
  return out;
}

std::vector<double> neighbor_degree_centrality(const Graph& g) {
  const auto dc = degree_centrality(g);
  std::vector<double> out(g.num_nodes(), 0.0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    double sum = 0.0;
    for (NodeId u : g.neighbors(v)) sum += dc[u];
    out[v] = sum / static_cast<double>(g.degree(v));
  }
  return out;
}

std::vector<std::uint32_t> core_numbers(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::uint32_t> degree(n);
  std::size_t max_degree = 0;
  for (NodeId v = 0; v < n; ++v) {
    degree[v] = static_cast<std::uint32_t>(g.degree(v));
    max_degree = std::max<std::size_t>(max_degree, degree[v]);
  }
  // Bucket sort by degree, then peel in nondecreasing order.
  std::vector<std::size_t> bin(max_degree + 2, 0);
  for (auto d : degree) ++bin[d + 1];
  std::partial_sum(bin.begin(), bin.end(), bin.begin());
  std::vector<NodeId> order(n);
  std::vector<std::size_t> position(n);
  {
    std::vector<std::size_t> cursor(bin.begin(), bin.end() - 1);
    for (NodeId v = 0; v < n; ++v) {
      position[v] = cursor[degree[v]]++;
      order[position[v]] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId v = order[i];
    for (NodeId u : g.neighbors(v)) {
      if (degree[u] > degree[v]) {
        const std::uint32_t du = degree[u];
        const std::size_t pu = position[u];
        const std::size_t pw = bin[du];
        const NodeId w = order[pw];
        if (u != w) {
          std::swap(order[pu], order[pw]);
          position[u] = pw;
          position[w] = pu;
        }
        ++bin[du];
        --degree[u];
      }
    }
  }
  return degree;
}

std::vector<double> eigenvector_centrality(const Graph& g, double tolerance, std::size_t max_iter,
                                           std::size_t* iterations) {
  const std::size_t n = g.num_nodes();
  std::vector<double> x(n, 1.0);
  std::vector<double> y(n);
  std::size_t steps = 0;
  for (; steps < max_iter; ++steps) {
    double top = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      double sum = x[v];
      for (NodeId u : g.neighbors(v)) sum += x[u];
      y[v] = sum;
      top = std::max(top, sum);
    }
    double change = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      y[v] /= top;
      change = std::max(change, std::abs(y[v] - x[v]));
    }
    x.swap(y);
    if (change < tolerance) {
      ++steps;
      break;
    }
  }
  if (iterations) *iterations = steps;
  return x;
}

namespace {

struct BfsScratch {
  explicit BfsScratch(std::size_t n) : distance(n, -1), paths(n, 0.0), dependency(n, 0.0) { order.reserve(n); }
  std::vector<std::int32_t> distance;
  std::vector<double> paths;
  std::vector<double> dependency;
  std::vector<NodeId> order;
};

}  // namespace

PathCentralities path_centralities(const Graph& g, const PathOptions& options) {
  const std::size_t n = g.num_nodes();
  PathCentralities out;

  std::vector<char> pivot;
  double scale = 1.0;
  if (options.betweenness) {
    pivot.assign(n, 1);
    if (options.bc_sample && *options.bc_sample < n) {
      const std::size_t k = std::max<std::size_t>(1, *options.bc_sample);
      std::vector<NodeId> all(n);
      std::iota(all.begin(), all.end(), NodeId{0});
      Rng rng(options.bc_seed);
      for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
      pivot.assign(n, 0);
      for (std::size_t i = 0; i < k; ++i) pivot[all[i]] = 1;
      scale = static_cast<double>(n) / static_cast<double>(k);
    }
  }
  std::vector<NodeId> sources;
  for (NodeId s = 0; s < n; ++s) {
    if (options.distances || (options.betweenness && pivot[s])) sources.push_back(s);
  }
  if (options.distances) {
    out.closeness.assign(n, 0.0);
    out.eccentricity.assign(n, 0);
  }

  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(64, sources.size()));
  std::vector<std::vector<double>> block_sum(options.betweenness ? blocks : 0);
  const int workers = static_cast<int>(std::max<std::size_t>(1, options.threads));

#pragma omp parallel num_threads(workers)
  {
    BfsScratch scratch(n);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
      const std::size_t first = sources.size() * static_cast<std::size_t>(b) / blocks;
      const std::size_t last = sources.size() * static_cast<std::size_t>(b + 1) / blocks;
      std::vector<double> acc;
      if (options.betweenness) acc.assign(n, 0.0);
      for (std::size_t i = first; i < last; ++i) {
        const NodeId s = sources[i];
        auto& dist = scratch.distance;
        auto& sigma = scratch.paths;
        auto& order = scratch.order;
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        order.push_back(s);
        std::uint64_t distance_sum = 0;
        for (std::size_t head = 0; head < order.size(); ++head) {
          const NodeId v = order[head];
          distance_sum += static_cast<std::uint64_t>(dist[v]);
          for (NodeId u : g.neighbors(v)) {
            if (dist[u] < 0) {
              dist[u] = dist[v] + 1;
              order.push_back(u);
            }
            if (dist[u] == dist[v] + 1) sigma[u] += sigma[v];
          }
        }
        if (options.distances) {
          out.closeness[s] = distance_sum > 0 ? static_cast<double>(order.size() - 1) / static_cast<double>(distance_sum) : 0.0;
          out.eccentricity[s] = static_cast<std::uint32_t>(dist[order.back()]);
        }
        if (options.betweenness && pivot[s]) {
          auto& delta = scratch.dependency;
          for (std::size_t k = order.size(); k-- > 1;) {
            const NodeId w = order[k];
            const double share = (1.0 + delta[w]) / sigma[w];
            for (NodeId v : g.neighbors(w)) {
              if (dist[v] == dist[w] - 1) delta[v] += sigma[v] * share;
            }
            acc[w] += delta[w];
          }
        }
        for (NodeId v : order) {
          dist[v] = -1;
          sigma[v] = 0.0;
          scratch.dependency[v] = 0.0;
        }
      }
      if (options.betweenness) block_sum[static_cast<std::size_t>(b)] = std::move(acc);
    }
  }

  if (options.betweenness) {
    out.betweenness_raw.assign(n, 0.0);
    for (const auto& acc : block_sum) {
      for (std::size_t v = 0; v < n; ++v) out.betweenness_raw[v] += acc[v];
    }
    // Every unordered pair was seen from both endpoints.
    const double norm = n > 2 ? 2.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2)) : 0.0;
    out.betweenness.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      out.betweenness_raw[v] *= scale / 2.0;
      out.betweenness[v] = out.betweenness_raw[v] * norm;
    }
  }
  return out;
}

FeatureMatrix compute_classical_features(const Graph& g, const ClassicalSpec& spec) {
  if (spec.enabled.empty()) throw ParameterError("no classical features enabled");
  for (const auto& name : spec.enabled) {
    if (std::find(kClassicalFeatureNames.begin(), kClassicalFeatureNames.end(), name) == kClassicalFeatureNames.end()) {
      throw ParameterError("unknown classical feature '" + name + "'");
    }
  }
  if (!(spec.ec_tolerance > 0.0) || spec.ec_max_iter == 0) throw ParameterError("invalid eigenvector settings");
  auto wants = [&](std::string_view name) { return spec.enabled.count(std::string(name)) > 0; };

  const bool need_distances = wants("cc") || wants("eccen");
  if (need_distances && !spec.per_component) {
    std::size_t count = 0;
    const auto component = connected_components(g, &count);
    if (count > 1) {
      std::vector<std::size_t> size(count, 0);
      std::vector<NodeId> first(count, 0);
      for (NodeId v = g.num_nodes(); v-- > 0;) {
        ++size[component[v]];
        first[component[v]] = v;
      }
      std::ostringstream msg;
      msg << "closeness/eccentricity need a connected graph but it has " << count << " components:";
      for (std::size_t c = 0; c < std::min<std::size_t>(count, 5); ++c) {
        msg << " [component " << c << ": " << size[c] << " nodes, e.g. '" << g.label(first[c]) << "']";
      }
      if (count > 5) msg << " ...";
      msg << "; keep the giant component or enable per-component mode";
      throw InputError(msg.str());
    }
  }

  PathCentralities paths;
  if (need_distances || wants("bc")) {
    PathOptions options;
    options.betweenness = wants("bc");
    options.distances = need_distances;
    options.bc_sample = spec.bc_sample;
    options.bc_seed = spec.bc_seed;
    options.threads = spec.threads;
    paths = path_centralities(g, options);
  }

  std::vector<std::string> names;
  for (auto name : kClassicalFeatureNames) {
    if (wants(name)) names.emplace_back(name);
  }
  FeatureMatrix out(names, g.num_nodes());
  std::size_t col = 0;
  auto put = [&](const auto& values) {
    for (std::size_t v = 0; v < g.num_nodes(); ++v) out.at(v, col) = static_cast<double>(values[v]);
    ++col;
  };
  for (auto name : kClassicalFeatureNames) {
    if (!wants(name)) continue;
    if (name == "lcc") put(local_clustering(g, spec.threads));
    else if (name == "bc") put(paths.betweenness);
    else if (name == "cc") put(paths.closeness);
    else if (name == "dc") put(degree_centrality(g));
    else if (name == "ndc") put(neighbor_degree_centrality(g));
    else if (name == "ec") put(eigenvector_centrality(g, spec.ec_tolerance, spec.ec_max_iter));
    else if (name == "eccen") put(paths.eccentricity);
    else if (name == "core") put(core_numbers(g));
  }
  return out;
}

}  // namespace commfeat
