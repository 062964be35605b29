#include "gfc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gfc {

namespace {

// Remap arbitrary non-negative ids to compact 0..K-1 (order of first value).
std::vector<int> compact_labels(std::span<const int> labels, int& k_out) {
    std::vector<int> uniq(labels.begin(), labels.end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    k_out = static_cast<int>(uniq.size());
    std::vector<int> out;
    out.reserve(labels.size());
    for (int l : labels)
        out.push_back(static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), l) - uniq.begin()));
    return out;
}

double comb2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

ContingencyTable build_contingency(std::span<const int> true_labels,
                                   std::span<const int> pred_labels) {
    if (true_labels.size() != pred_labels.size())
        throw std::invalid_argument("build_contingency: label length mismatch");
    int kt = 0, kp = 0;
    const auto t = compact_labels(true_labels, kt);
    const auto p = compact_labels(pred_labels, kp);

    ContingencyTable ct;
    ct.n = static_cast<long long>(t.size());
    ct.counts.assign(kt, std::vector<long long>(kp, 0));
    ct.row_marginals.assign(kt, 0);
    ct.col_marginals.assign(kp, 0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        ++ct.counts[t[i]][p[i]];
        ++ct.row_marginals[t[i]];
        ++ct.col_marginals[p[i]];
    }
    return ct;
}

std::vector<int> assign_labels(const PointSet& points, const PointSet& centroids) {
    if (centroids.empty()) throw std::invalid_argument("assign_labels: no centroids");
    std::vector<int> labels(points.size());
    const std::int64_t n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto p = points[static_cast<std::size_t>(i)];
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < centroids.size(); ++j) {
            const double d = squared_distance(p, centroids[j]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(j);
            }
        }
        labels[static_cast<std::size_t>(i)] = best;
    }
    return labels;
}

double adjusted_rand_index(std::span<const int> true_labels, std::span<const int> pred_labels) {
    if (true_labels.size() != pred_labels.size())
        throw std::invalid_argument("adjusted_rand_index: label length mismatch");
    if (true_labels.size() < 2)
        throw std::invalid_argument("adjusted_rand_index: needs at least 2 points");

    const ContingencyTable ct = build_contingency(true_labels, pred_labels);

    double sum_ij = 0.0;
    for (const auto& row : ct.counts)
        for (long long c : row) sum_ij += comb2(static_cast<double>(c));
    double sum_a = 0.0, sum_b = 0.0;
    for (long long a : ct.row_marginals) sum_a += comb2(static_cast<double>(a));
    for (long long b : ct.col_marginals) sum_b += comb2(static_cast<double>(b));

    const double expected = sum_a * sum_b / comb2(static_cast<double>(ct.n));
    const double denom = 0.5 * (sum_a + sum_b) - expected;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (sum_ij - expected) / denom;
}

double normalized_mutual_information(std::span<const int> true_labels,
                                     std::span<const int> pred_labels) {
    if (true_labels.size() != pred_labels.size())
        throw std::invalid_argument("normalized_mutual_information: label length mismatch");
    if (true_labels.empty())
        throw std::invalid_argument("normalized_mutual_information: empty labels");

    const ContingencyTable ct = build_contingency(true_labels, pred_labels);
    const double n = static_cast<double>(ct.n);

    double h_t = 0.0, h_p = 0.0;
    for (long long a : ct.row_marginals)
        if (a > 0) h_t -= (a / n) * std::log(a / n);
    for (long long b : ct.col_marginals)
        if (b > 0) h_p -= (b / n) * std::log(b / n);

    if (h_t == 0.0 && h_p == 0.0) return 1.0;  // both constant: identical up to relabeling
    if (h_t == 0.0 || h_p == 0.0) return 0.0;

    double mi = 0.0;
    for (std::size_t i = 0; i < ct.counts.size(); ++i)
        for (std::size_t j = 0; j < ct.counts[i].size(); ++j) {
            const long long c = ct.counts[i][j];
            if (c == 0) continue;
            mi += (c / n) * std::log((c * n) /
                                     (static_cast<double>(ct.row_marginals[i]) *
                                      static_cast<double>(ct.col_marginals[j])));
        }
    return mi / std::sqrt(h_t * h_p);
}

std::vector<int> hungarian_match(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) return {};
    for (const auto& row : cost)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("hungarian_match: cost matrix must be square");

    // Shortest augmenting path formulation with row/column potentials
    // (1-based internal indexing).
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> match(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) match[p[j] - 1] = j - 1;
    return match;
}

double centroid_error(const PointSet& estimated, const PointSet& reference) {
    if (estimated.size() != reference.size())
        throw std::invalid_argument("centroid_error: list length mismatch");
    const std::size_t n = estimated.size();
    if (n == 0) return 0.0;

    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cost[i][j] = euclidean_distance(estimated[i], reference[j]);

    const auto match = hungarian_match(cost);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost[i][match[i]];
    return total / static_cast<double>(n);
}

}  // namespace gfc
