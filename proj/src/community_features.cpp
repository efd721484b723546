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

#include "commfeat/community_features.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "commfeat/error.hpp"

namespace commfeat {

CommunityProfile CommunityProfile::build(const Graph& g, const Partition& p) {
  if (p.num_nodes() != g.num_nodes()) throw InputError("partition does not match graph size");
  const std::size_t n = g.num_nodes();
  const std::size_t l = p.num_communities();
  CommunityProfile profile;
  profile.offsets_.assign(n + 1, 0);
  profile.own_count_.assign(n, 0);
  profile.degree_.resize(n);
  profile.entries_.reserve(std::min<std::size_t>(2 * g.num_edges(), n * l));
  profile.volume_.resize(l);
  for (CommunityId c = 0; c < l; ++c) profile.volume_[c] = p.volume(c);
  profile.total_volume_ = g.total_volume();
  for (std::uint64_t vol : profile.volume_) profile.volume_square_sum_ += vol * vol;

  std::vector<std::uint32_t> count(l, 0);
  std::vector<CommunityId> touched;
  for (NodeId v = 0; v < n; ++v) {
    touched.clear();
    for (NodeId u : g.neighbors(v)) {
      const CommunityId c = p.community(u);
      if (count[c]++ == 0) touched.push_back(c);
    }
    std::sort(touched.begin(), touched.end());
    for (CommunityId c : touched) {
      profile.entries_.push_back({c, count[c]});
      count[c] = 0;
    }
    profile.offsets_[v + 1] = profile.entries_.size();
    profile.degree_[v] = static_cast<std::uint32_t>(g.degree(v));
    const auto own = std::lower_bound(
        profile.entries_.begin() + static_cast<std::ptrdiff_t>(profile.offsets_[v]), profile.entries_.end(),
        p.community(v), [](const Entry& e, CommunityId c) { return e.community < c; });
    if (own != profile.entries_.end() && own->community == p.community(v)) profile.own_count_[v] = own->count;
  }
  return profile;
}

Distances distances_to_null(const CommunityProfile& profile,
                            std::span<const std::pair<CommunityId, double>> dist) {
  const double total = static_cast<double>(profile.total_volume());
  std::uint64_t support_volume = 0;
  std::uint64_t support_square = 0;
  double l1 = 0.0;
  double l2 = 0.0;
  double kl = 0.0;
  double hellinger = 0.0;
  for (auto [c, prob] : dist) {
    const std::uint64_t vol = profile.volume(c);
    const double share = static_cast<double>(vol) / total;
    support_volume += vol;
    support_square += vol * vol;
    const double diff = prob - share;
    l1 += std::abs(diff);
    l2 += diff * diff;
    kl += prob * std::log(prob / share);
    const double root_diff = std::sqrt(prob) - std::sqrt(share);
    hellinger += root_diff * root_diff;
  }
  // Null mass outside the support, from exact integer complements.
  const double outside = static_cast<double>(profile.total_volume() - support_volume) / total;
  const double outside_square =
      static_cast<double>(profile.volume_square_sum() - support_square) / (total * total);
  Distances d;
  d.l1 = l1 + outside;
  d.l2 = std::sqrt(l2 + outside_square);
  d.kl = std::max(0.0, kl);
  d.hellinger = std::sqrt(0.5 * (hellinger + outside));
  return d;
}

CommunityFeatures::CommunityFeatures(const Graph& g, const Partition& p, double resolution)
    : graph_(g), partition_(p), resolution_(resolution), profile_(CommunityProfile::build(g, p)) {
  if (!(resolution > 0.0)) throw ParameterError("resolution must be positive");
  const std::size_t l = p.num_communities();
  internal_mean_.assign(l, 0.0);
  internal_sd_.assign(l, 0.0);
  std::vector<std::uint64_t> sum(l, 0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) sum[p.community(v)] += profile_.own_count(v);
  for (CommunityId c = 0; c < l; ++c) {
    internal_mean_[c] = static_cast<double>(sum[c]) / static_cast<double>(p.size(c));
  }
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const CommunityId c = p.community(v);
    const double dev = static_cast<double>(profile_.own_count(v)) - internal_mean_[c];
    internal_sd_[c] += dev * dev;
  }
  for (CommunityId c = 0; c < l; ++c) {
    internal_sd_[c] = std::sqrt(internal_sd_[c] / static_cast<double>(p.size(c)));
  }
}

double CommunityFeatures::cada(NodeId v) const {
  std::uint32_t most = 0;
  for (const auto& e : profile_.entries(v)) most = std::max(most, e.count);
  return static_cast<double>(profile_.degree(v)) / static_cast<double>(most);
}

double CommunityFeatures::cada_norm(NodeId v) const {
  return static_cast<double>(profile_.own_count(v)) / static_cast<double>(profile_.degree(v));
}

double CommunityFeatures::wmd(NodeId v) const {
  const CommunityId c = partition_.community(v);
  if (internal_sd_[c] == 0.0) return 0.0;
  return (static_cast<double>(profile_.own_count(v)) - internal_mean_[c]) / internal_sd_[c];
}

double CommunityFeatures::cpc(NodeId v) const {
  std::uint64_t squares = 0;
  for (const auto& e : profile_.entries(v)) squares += std::uint64_t{e.count} * e.count;
  const double deg = profile_.degree(v);
  return 1.0 - static_cast<double>(squares) / (deg * deg);
}

double CommunityFeatures::cas(NodeId v) const {
  const double deg = profile_.degree(v);
  const double inside = static_cast<double>(profile_.own_count(v)) / deg;
  const double vol = static_cast<double>(profile_.volume(partition_.community(v)));
  const double total = static_cast<double>(profile_.total_volume());
  return 2.0 * (inside - resolution_ * (vol - deg) / total);
}

SparseDistribution CommunityFeatures::q1_vector(NodeId v) const {
  SparseDistribution out;
  const double deg = profile_.degree(v);
  for (const auto& e : profile_.entries(v)) out.emplace_back(e.community, e.count / deg);
  return out;
}

SparseDistribution CommunityFeatures::q2_vector(NodeId v, Depth2Workspace& ws) const {
  for (NodeId u : graph_.neighbors(v)) {
    const double deg_u = profile_.degree(u);
    for (const auto& e : profile_.entries(u)) {
      if (ws.mass_[e.community] == 0.0) ws.touched_.push_back(e.community);
      ws.mass_[e.community] += e.count / deg_u;
    }
  }
  std::sort(ws.touched_.begin(), ws.touched_.end());
  SparseDistribution out;
  out.reserve(ws.touched_.size());
  const double deg_v = profile_.degree(v);
  for (CommunityId c : ws.touched_) {
    out.emplace_back(c, ws.mass_[c] / deg_v);
    ws.mass_[c] = 0.0;
  }
  ws.touched_.clear();
  return out;
}

SparseDistribution CommunityFeatures::q2_vector(NodeId v) const {
  Depth2Workspace ws(profile_.num_communities());
  return q2_vector(v, ws);
}

Distances CommunityFeatures::depth1(NodeId v) const {
  return distances_to_null(profile_, q1_vector(v));
}

Distances CommunityFeatures::depth2(NodeId v, Depth2Workspace& ws) const {
  return distances_to_null(profile_, q2_vector(v, ws));
}

Distances CommunityFeatures::depth2(NodeId v) const {
  Depth2Workspace ws(profile_.num_communities());
  return depth2(v, ws);
}

FeatureMatrix CommunityFeatures::compute_all(std::size_t threads) const {
  const std::size_t n = graph_.num_nodes();
  FeatureMatrix out(std::vector<std::string>(kCommunityFeatureNames.begin(), kCommunityFeatureNames.end()), n);
  const int workers = static_cast<int>(std::max<std::size_t>(1, threads));
#pragma omp parallel num_threads(workers)
  {
    Depth2Workspace ws(profile_.num_communities());
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      const auto v = static_cast<NodeId>(i);
      auto row = out.row(v);
      row[0] = cada(v);
      row[1] = cada_norm(v);
      row[2] = wmd(v);
      row[3] = cpc(v);
      row[4] = cas(v);
      const Distances d1 = depth1(v);
      row[5] = d1.l1;
      row[6] = d1.l2;
      row[7] = d1.kl;
      row[8] = d1.hellinger;
      const Distances d2 = depth2(v, ws);
      row[9] = d2.l1;
      row[10] = d2.l2;
      row[11] = d2.kl;
      row[12] = d2.hellinger;
    }
  }
  return out;
}

FeatureMatrix compute_community_features(const Graph& g, const Partition& p, double resolution,
                                         std::size_t threads) {
  return CommunityFeatures(g, p, resolution).compute_all(threads);
}

}  // namespace commfeat
