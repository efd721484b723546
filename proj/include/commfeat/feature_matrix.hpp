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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "commfeat/graph.hpp"

namespace commfeat {

/// Node-indexed table of named real features, stored row-major.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<std::string> names, std::size_t rows)
      : names_(std::move(names)), values_(names_.size() * rows, 0.0), rows_(rows) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  double& at(std::size_t row, std::size_t col) { return values_[row * cols() + col]; }
  double at(std::size_t row, std::size_t col) const { return values_[row * cols() + col]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols(), cols()}; }

  /// Column index by name; throws std::out_of_range when absent.
  std::size_t index_of(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;

  /// True when every entry is finite.
  bool all_finite() const;

  /// Columns of `other` appended to the right; row counts must match.
  void append(const FeatureMatrix& other);

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
  std::size_t rows_ = 0;
};

/// Header `node,<names...>`, one row per node keyed by external label.
void write_features_csv(std::ostream& out, const Graph& g, const FeatureMatrix& features);

}  // namespace commfeat
