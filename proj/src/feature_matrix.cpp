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

#include "commfeat/feature_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "commfeat/csv.hpp"

namespace commfeat {

std::size_t FeatureMatrix::index_of(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::out_of_range("no feature named '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

std::vector<double> FeatureMatrix::column(const std::string& name) const {
  const std::size_t c = index_of(name);
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
  return out;
}

bool FeatureMatrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

void FeatureMatrix::append(const FeatureMatrix& other) {
  if (names_.empty()) {
    *this = other;
    return;
  }
  if (other.rows_ != rows_) throw std::invalid_argument("row count mismatch");
  const std::size_t left = cols();
  const std::size_t right = other.cols();
  std::vector<double> merged(rows_ * (left + right));
  for (std::size_t r = 0; r < rows_; ++r) {
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(r * left), left,
                merged.begin() + static_cast<std::ptrdiff_t>(r * (left + right)));
    std::copy_n(other.values_.begin() + static_cast<std::ptrdiff_t>(r * right), right,
                merged.begin() + static_cast<std::ptrdiff_t>(r * (left + right) + left));
  }
  values_ = std::move(merged);
  names_.insert(names_.end(), other.names_.begin(), other.names_.end());
}

void write_features_csv(std::ostream& out, const Graph& g, const FeatureMatrix& features) {
  if (features.rows() != g.num_nodes()) throw std::invalid_argument("feature rows do not match graph");
  out << "node";
  for (const auto& name : features.names()) out << ',' << csv::escape(name);
  out << '\n';
  for (NodeId v = 0; v < features.rows(); ++v) {
    out << csv::escape(g.label(v));
    for (double x : features.row(v)) out << ',' << csv::format_double(x);
    out << '\n';
  }
}

}  // namespace commfeat
