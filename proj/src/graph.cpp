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

#include "commfeat/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "commfeat/csv.hpp"
#include "commfeat/error.hpp"

namespace commfeat {

namespace {

void check_node(NodeId v, std::size_t n) {
  if (v >= n) throw std::out_of_range("node id " + std::to_string(v) + " out of range");
}

bool is_unsigned_integer(const std::string& s) {
  return !s.empty() && s.size() <= 19 &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<std::string_view> tokenize(std::string_view line, char delimiter) {
  std::vector<std::string_view> tokens;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  if (delimiter == '\0') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && is_space(line[i])) ++i;
      const std::size_t start = i;
      while (i < line.size() && !is_space(line[i])) ++i;
      if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(delimiter, start);
    std::string_view tok = line.substr(start, end == std::string_view::npos ? line.npos : end - start);
    while (!tok.empty() && is_space(tok.front())) tok.remove_prefix(1);
    while (!tok.empty() && is_space(tok.back())) tok.remove_suffix(1);
    tokens.push_back(tok);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  if (tokens.size() == 1 && tokens[0].empty()) tokens.clear();
  return tokens;
}

}  // namespace

Graph Graph::from_edges(std::size_t num_nodes, std::span<const Edge> edges,
                        std::vector<std::string> labels, CleaningReport* report,
                        std::vector<NodeId>* kept) {
  if (!labels.empty() && labels.size() != num_nodes) {
    throw std::invalid_argument("label count does not match node count");
  }
  CleaningReport local;
  std::vector<Edge> clean;
  clean.reserve(edges.size());
  for (auto [u, v] : edges) {
    check_node(u, num_nodes);
    check_node(v, num_nodes);
    if (u == v) {
      ++local.self_loops;
      continue;
    }
    clean.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(clean.begin(), clean.end());
  const auto last = std::unique(clean.begin(), clean.end());
  local.duplicate_edges = static_cast<std::size_t>(clean.end() - last);
  clean.erase(last, clean.end());

  std::vector<std::size_t> degree(num_nodes, 0);
  for (auto [u, v] : clean) {
    ++degree[u];
    ++degree[v];
  }
  constexpr NodeId kDropped = ~NodeId{0};
  std::vector<NodeId> new_id(num_nodes, kDropped);
  std::vector<NodeId> old_id;
  for (std::size_t v = 0; v < num_nodes; ++v) {
    if (degree[v] > 0) {
      new_id[v] = static_cast<NodeId>(old_id.size());
      old_id.push_back(static_cast<NodeId>(v));
    }
  }
  local.isolated_nodes = num_nodes - old_id.size();

  Graph g;
  const std::size_t n = old_id.size();
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[old_id[i]];
  g.adjacency_.resize(2 * clean.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (min, max), so every list fills in increasing order.
  for (auto [u, v] : clean) {
    const NodeId a = new_id[u];
    const NodeId b = new_id[v];
    g.adjacency_[cursor[a]++] = b;
    g.adjacency_[cursor[b]++] = a;
  }
  g.labels_.reserve(n);
  for (NodeId v : old_id) {
    g.labels_.push_back(labels.empty() ? std::to_string(v) : std::move(labels[v]));
  }
  if (report) *report = local;
  if (kept) *kept = std::move(old_id);
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::uint64_t Graph::volume(std::span<const NodeId> nodes) const {
  std::uint64_t total = 0;
  for (NodeId v : nodes) {
    check_node(v, num_nodes());
    total += degree(v);
  }
  return total;
}

std::uint64_t Graph::induced_edge_count(std::span<const NodeId> nodes) const {
  std::vector<char> member(num_nodes(), 0);
  for (NodeId v : nodes) {
    check_node(v, num_nodes());
    member[v] = 1;
  }
  std::uint64_t twice = 0;
  for (NodeId v = 0; v < num_nodes(); ++v) {
    if (!member[v]) continue;
    for (NodeId u : neighbors(v)) twice += member[u];
  }
  return twice / 2;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId v = 0; v < num_nodes(); ++v) {
    for (NodeId u : neighbors(v)) {
      if (v < u) out.emplace_back(v, u);
    }
  }
  return out;
}

Graph Graph::induced_subgraph(std::span<const NodeId> nodes) const {
  constexpr NodeId kAbsent = ~NodeId{0};
  std::vector<NodeId> local(num_nodes(), kAbsent);
  std::vector<std::string> sub_labels;
  for (NodeId v : nodes) {
    check_node(v, num_nodes());
    local[v] = static_cast<NodeId>(sub_labels.size());
    sub_labels.push_back(labels_[v]);
  }
  std::vector<Edge> sub_edges;
  for (NodeId v : nodes) {
    for (NodeId u : neighbors(v)) {
      if (v < u && local[u] != kAbsent) sub_edges.emplace_back(local[v], local[u]);
    }
  }
  const std::size_t n = sub_labels.size();
  return from_edges(n, sub_edges, std::move(sub_labels));
}

Graph load_edge_list(std::istream& in, const EdgeListOptions& options, CleaningReport* report) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  auto intern = [&](std::string_view token) {
    auto [it, inserted] = ids.try_emplace(std::string(token), static_cast<NodeId>(labels.size()));
    if (inserted) labels.emplace_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view(line);
    const auto first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    if (view[first] == options.comment) continue;
    const auto tokens = tokenize(view, options.delimiter);
    if (tokens.size() != 2 || tokens[0].empty() || tokens[1].empty()) {
      throw ParseError("expected exactly 2 tokens, got " + std::to_string(tokens.size()),
                       line_number);
    }
    const NodeId u = intern(tokens[0]);
    const NodeId v = intern(tokens[1]);
    edges.emplace_back(u, v);
  }

  // Rank labels so that internal ids do not depend on line order.
  const bool numeric = std::all_of(labels.begin(), labels.end(), is_unsigned_integer);
  std::vector<NodeId> order(labels.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  if (numeric) {
    std::vector<std::uint64_t> value(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      std::from_chars(labels[i].data(), labels[i].data() + labels[i].size(), value[i]);
    }
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
      return value[a] != value[b] ? value[a] < value[b] : labels[a] < labels[b];
    });
  } else {
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return labels[a] < labels[b]; });
  }
  std::vector<NodeId> rank(labels.size());
  std::vector<std::string> sorted_labels(labels.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    rank[order[r]] = static_cast<NodeId>(r);
    sorted_labels[r] = std::move(labels[order[r]]);
  }
  for (auto& [u, v] : edges) {
    u = rank[u];
    v = rank[v];
  }
  const std::size_t n = sorted_labels.size();
  Graph g = Graph::from_edges(n, edges, std::move(sorted_labels), report);
  if (g.num_nodes() == 0) throw InputError("graph is empty after removing self-loops and isolated nodes");
  return g;
}

Graph load_edge_list_file(const std::string& path, const EdgeListOptions& options,
                          CleaningReport* report) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge list '" + path + "'");
  try {
    return load_edge_list(in, options, report);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (auto [u, v] : g.edges()) out << g.label(u) << ' ' << g.label(v) << '\n';
}

void write_id_mapping(std::ostream& out, const Graph& g) {
  out << "external_id,internal_id\n";
  for (NodeId v = 0; v < g.num_nodes(); ++v) out << csv::escape(g.label(v)) << ',' << v << '\n';
}

std::vector<NodeId> connected_components(const Graph& g, std::size_t* count) {
  constexpr NodeId kUnseen = ~NodeId{0};
  std::vector<NodeId> component(g.num_nodes(), kUnseen);
  NodeId next = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (component[s] != kUnseen) continue;
    component[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId u : g.neighbors(v)) {
        if (component[u] == kUnseen) {
          component[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return component;
}

Graph largest_component(const Graph& g) {
  std::size_t count = 0;
  const auto component = connected_components(g, &count);
  if (count <= 1) return g;
  std::vector<std::size_t> size(count, 0);
  for (NodeId c : component) ++size[c];
  const auto best = static_cast<NodeId>(std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (component[v] == best) nodes.push_back(v);
  }
  return g.induced_subgraph(nodes);
}

}  // namespace commfeat
