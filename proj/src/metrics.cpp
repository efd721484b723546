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

#include "commfeat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace commfeat {

namespace {

// Dense 0-based relabelling; returns cluster sizes.
std::vector<std::size_t> densify(std::span<const std::int64_t> labels, std::vector<std::size_t>& dense) {
  std::map<std::int64_t, std::size_t> index;
  dense.resize(labels.size());
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = index.try_emplace(labels[i], sizes.size());
    if (inserted) sizes.push_back(0);
    dense[i] = it->second;
    ++sizes[it->second];
  }
  return sizes;
}

struct Contingency {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> cells;
};

Contingency contingency(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("labellings differ in length");
  if (a.empty()) throw std::invalid_argument("empty labelling");
  Contingency t;
  std::vector<std::size_t> da;
  std::vector<std::size_t> db;
  t.rows = densify(a, da);
  t.cols = densify(b, db);
  for (std::size_t i = 0; i < a.size(); ++i) ++t.cells[{da[i], db[i]}];
  return t;
}

double entropy_of(const std::vector<std::size_t>& sizes, double n) {
  double h = 0.0;
  for (std::size_t s : sizes) {
    const double p = static_cast<double>(s) / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

double rank_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return scores[i] < scores[j]; });
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        positive_rank_sum += midrank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = scores.size() - positives;
  if (positives == 0 || negatives == 0) throw std::invalid_argument("AUC needs both classes");
  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
}

double entropy(std::span<const std::int64_t> labels) {
  std::vector<std::size_t> dense;
  return entropy_of(densify(labels, dense), static_cast<double>(labels.size()));
}

double mutual_information(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  const Contingency t = contingency(a, b);
  const double n = static_cast<double>(a.size());
  double mi = 0.0;
  for (const auto& [cell, count] : t.cells) {
    const double nij = static_cast<double>(count);
    mi += nij / n * std::log(n * nij / (static_cast<double>(t.rows[cell.first]) * static_cast<double>(t.cols[cell.second])));
  }
  return std::max(0.0, mi);
}

double expected_mutual_information(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  const Contingency t = contingency(a, b);
  const auto n = static_cast<double>(a.size());
  const std::size_t total = a.size();
  const double lg_n = std::lgamma(n + 1.0);
  double emi = 0.0;
  for (std::size_t ai : t.rows) {
    for (std::size_t bj : t.cols) {
      const std::size_t lo = std::max<std::size_t>(1, ai + bj > total ? ai + bj - total : 0);
      const std::size_t hi = std::min(ai, bj);
      const double x = static_cast<double>(ai);
      const double y = static_cast<double>(bj);
      const double fixed = std::lgamma(x + 1.0) + std::lgamma(y + 1.0) + std::lgamma(n - x + 1.0) +
                           std::lgamma(n - y + 1.0) - lg_n;
      for (std::size_t k = lo; k <= hi; ++k) {
        const double nij = static_cast<double>(k);
        const double log_prob = fixed - std::lgamma(nij + 1.0) - std::lgamma(x - nij + 1.0) -
                                std::lgamma(y - nij + 1.0) - std::lgamma(n - x - y + nij + 1.0);
        emi += nij / n * std::log(n * nij / (x * y)) * std::exp(log_prob);
      }
    }
  }
  return emi;
}

double adjusted_mutual_information(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  const Contingency t = contingency(a, b);
  const double n = static_cast<double>(a.size());
  if ((t.rows.size() == 1 && t.cols.size() == 1) || (t.rows.size() == a.size() && t.cols.size() == a.size())) {
    return 1.0;
  }
  const double mi = mutual_information(a, b);
  const double emi = expected_mutual_information(a, b);
  const double normalizer = (entropy_of(t.rows, n) + entropy_of(t.cols, n)) / 2.0;
  double denominator = normalizer - emi;
  constexpr double kTiny = 2.220446049250313e-16;
  if (denominator < 0.0) denominator = std::min(denominator, -kTiny);
  else denominator = std::max(denominator, kTiny);
  return (mi - emi) / denominator;
}

}  // namespace commfeat
