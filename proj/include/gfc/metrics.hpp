#pragma once

#include <vector>

#include "gfc/core.hpp"

namespace gfc {

struct ContingencyTable {
    std::vector<std::vector<long long>> counts;  // true class x predicted class
    std::vector<long long> row_marginals;
    std::vector<long long> col_marginals;
    long long n = 0;
};

ContingencyTable build_contingency(std::span<const int> true_labels,
                                   std::span<const int> pred_labels);

/// Nearest-centroid labels; ties go to the lower centroid index.
std::vector<int> assign_labels(const PointSet& points, const PointSet& centroids);

/// Adjusted Rand Index. Returns NaN when the adjustment denominator is zero
/// (both labelings trivial), which callers report as NA.
double adjusted_rand_index(std::span<const int> true_labels, std::span<const int> pred_labels);

/// Normalized mutual information with a geometric-mean normalizer and
/// natural logs. Both labelings constant yields 1; exactly one constant
/// yields 0.
double normalized_mutual_information(std::span<const int> true_labels,
                                     std::span<const int> pred_labels);

/// Minimum-cost perfect matching (Hungarian algorithm) over a square cost
/// matrix; returns per-row matched column indices.
std::vector<int> hungarian_match(const std::vector<std::vector<double>>& cost);

/// Mean Euclidean distance between estimated and reference centroids under
/// the minimum-cost matching.
double centroid_error(const PointSet& estimated, const PointSet& reference);

}  // namespace gfc
