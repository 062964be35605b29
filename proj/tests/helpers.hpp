#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gfc/field.hpp"
#include "gfc/rng.hpp"

namespace gfc::testing {

inline double laplace_cdf(double x, double b) {
    return x < 0.0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b);
}

/// Kolmogorov-Smirnov p-value of `samples` against Laplace(0, b), via the
/// asymptotic Kolmogorov distribution.
inline double ks_pvalue_laplace(std::vector<double> samples, double b) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d_stat = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = laplace_cdf(samples[i], b);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d_stat = std::max({d_stat, f - lo, hi - f});
    }
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d_stat;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
                            std::exp(-2.0 * k * k * lambda * lambda);
        p += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::clamp(p, 0.0, 1.0);
}

/// Independent double-loop energy evaluation, the oracle for field checks.
inline double energy_brute(std::span<const double> y,
                           const std::vector<gfc::WeightedCentroid>& sources, double softening,
                           double p) {
    double total = 0.0;
    for (const auto& s : sources) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double diff = s.position[k] - y[k];
            d2 += diff * diff;
        }
        total += s.mass / (std::pow(std::sqrt(d2), p) + softening);
    }
    return total;
}

/// Brute-force components of `indices` under the <= radius relation, via BFS
/// over an explicit adjacency list (no union-find; independent of the
/// library's implementation path). Components sorted, ordered by first member.
inline std::vector<std::vector<int>> components_bfs(const std::vector<int>& indices,
                                                    const gfc::PointSet& positions,
                                                    double radius) {
    const std::size_t m = indices.size();
    const double r2 = radius * radius;
    std::vector<std::vector<int>> adj(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (gfc::squared_distance(positions[indices[i]], positions[indices[j]]) <= r2) {
                adj[i].push_back(static_cast<int>(j));
                adj[j].push_back(static_cast<int>(i));
            }

    std::vector<char> visited(m, 0);
    std::vector<std::vector<int>> comps;
    for (std::size_t s = 0; s < m; ++s) {
        if (visited[s]) continue;
        std::vector<int> stack = {static_cast<int>(s)}, comp;
        visited[s] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            comp.push_back(indices[v]);
            for (int w : adj[v])
                if (!visited[w]) {
                    visited[w] = 1;
                    stack.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

/// Random source set for field/topology property tests.
inline std::vector<gfc::WeightedCentroid> random_sources(gfc::Rng& rng, int count, int dim,
                                                         double box = 10.0) {
    std::vector<gfc::WeightedCentroid> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        gfc::WeightedCentroid wc;
        wc.position.resize(dim);
        for (int d = 0; d < dim; ++d) wc.position[d] = rng.uniform(-box, box);
        wc.mass = rng.uniform(0.05, 1.0);
        wc.source_client = 0;
        wc.member_count = 1;
        out.push_back(std::move(wc));
    }
    return out;
}

}  // namespace gfc::testing
