#pragma once

#include <cstdint>
#include <vector>

#include "gfc/core.hpp"
#include "gfc/rng.hpp"

namespace gfc {

struct KMeansConfig {
    int k = 1;
    int max_iters = 100;
    double tol = 1e-6;  // centroid-shift convergence threshold
    std::uint64_t init_seed = 0;
};

struct KMeansResult {
    PointSet centroids;
    std::vector<int> assignment;            // per input point, in input order
    std::vector<double> iteration_inertia;  // post-assignment inertia per Lloyd iteration
    int iterations = 0;
    double inertia = 0.0;
};

/// Lloyd's algorithm from k-means++ initialization. Runs over a canonical
/// (lexicographic) ordering of the points so that results are invariant to
/// input permutation under a fixed seed. Empty clusters are re-seeded to the
/// point farthest from its current centroid.
KMeansResult kmeans(const PointSet& points, const KMeansConfig& cfg);

/// Nearest-centroid assignment kernels; ties go to the lower centroid index.
/// The parallel kernel is a pure per-point map and returns bit-identical
/// results to the serial reference.
void assign_points_serial(const PointSet& points, const PointSet& centroids,
                          std::vector<int>& assignment);
void assign_points_parallel(const PointSet& points, const PointSet& centroids,
                            std::vector<int>& assignment);

}  // namespace gfc
