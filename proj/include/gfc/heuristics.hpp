#pragma once

#include <vector>

#include "gfc/local.hpp"

namespace gfc {

struct HeuristicParams {
    int local_k = 1;
    double softening = 1e-6;
    double alpha = 2.0;
    double radius = 1.0;
};

/// k(n) = round(15 + n/500); callers clamp to the client shard size.
int heuristic_k(long long n);

/// delta(eps) = 500 * exp(-5 eps), floored at 1e-6.
double heuristic_softening(double epsilon);

/// alpha(eps) = 2 + 20 / (eps + 1).
double heuristic_alpha(double epsilon);

/// All three closed-form rules plus the percentile radius over the sources.
HeuristicParams heuristic_all(long long n, double epsilon,
                              const std::vector<WeightedCentroid>& sources);

}  // namespace gfc
