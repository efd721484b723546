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

#include <cstdint>
#include <span>

namespace commfeat {

/// Area under the ROC curve of `scores` for the positive class (label 1),
/// via the Mann-Whitney rank statistic with midranks for ties. Throws
/// std::invalid_argument unless both classes are present.
double rank_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Shannon entropy (natural log) of a labelling.
double entropy(std::span<const std::int64_t> labels);

double mutual_information(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

/// Mutual information expected between random labellings with the same
/// cluster sizes (hypergeometric model).
double expected_mutual_information(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

/// (MI - E[MI]) / (mean(H(a), H(b)) - E[MI]), arithmetic normalisation.
double adjusted_mutual_information(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

}  // namespace commfeat
