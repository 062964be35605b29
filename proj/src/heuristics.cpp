#include "gfc/heuristics.hpp"

#include <cmath>

#include "gfc/topology.hpp"

namespace gfc {

int heuristic_k(long long n) {
    if (n < 1) throw std::invalid_argument("heuristic_k: n must be >= 1");
    return static_cast<int>(std::llround(15.0 + static_cast<double>(n) / 500.0));
}

double heuristic_softening(double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("heuristic_softening: epsilon must be > 0");
    return std::max(1e-6, 500.0 * std::exp(-5.0 * epsilon));
}

double heuristic_alpha(double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("heuristic_alpha: epsilon must be > 0");
    return 2.0 + 20.0 / (epsilon + 1.0);
}

HeuristicParams heuristic_all(long long n, double epsilon,
                              const std::vector<WeightedCentroid>& sources) {
    HeuristicParams hp;
    hp.local_k = heuristic_k(n);
    hp.softening = heuristic_softening(epsilon);
    hp.alpha = heuristic_alpha(epsilon);
    bool degenerate = sources.size() < 2;
    if (!degenerate) {
        degenerate = true;
        for (std::size_t i = 1; i < sources.size(); ++i)
            if (sources[i].position != sources[0].position) {
                degenerate = false;
                break;
            }
    }
    hp.radius = degenerate ? 1e-3 * box_diagonal(compute_bounds(sources))
                           : radius_heuristic(sources);
    return hp;
}

}  // namespace gfc
