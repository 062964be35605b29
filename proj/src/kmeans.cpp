#include "gfc/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace gfc {

namespace {

int nearest_centroid(std::span<const double> p, const PointSet& centroids) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centroids.size(); ++j) {
        const double d = squared_distance(p, centroids[j]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(j);
        }
    }
    return best;
}

// Lexicographic order over coordinates, original index as the final tie-break.
std::vector<std::size_t> canonical_order(const PointSet& pts) {
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto pa = pts[a], pb = pts[b];
        for (int d = 0; d < pts.dim; ++d) {
            if (pa[d] < pb[d]) return true;
            if (pa[d] > pb[d]) return false;
        }
        return a < b;
    });
    return order;
}

// k-means++ seeding over the canonical sequence.
PointSet kmeanspp_init(const PointSet& pts, std::span<const std::size_t> order, int k, Rng& rng) {
    const std::size_t n = order.size();
    PointSet centers(pts.dim);
    centers.reserve(static_cast<std::size_t>(k));

    std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
    std::vector<char> chosen(n, 0);

    std::size_t first = rng.uniform_index(n);
    centers.push_back(pts[order[first]]);
    chosen[first] = 1;

    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        const auto last = centers[centers.size() - 1];
        for (std::size_t i = 0; i < n; ++i) {
            dist2[i] = std::min(dist2[i], squared_distance(pts[order[i]], last));
            if (!chosen[i]) total += dist2[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double u = rng.uniform01() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i]) continue;
                acc += dist2[i];
                if (acc > u) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {  // ran off the end on rounding; take the last candidate
                for (std::size_t i = n; i-- > 0;)
                    if (!chosen[i]) {
                        pick = i;
                        break;
                    }
            }
        } else {
            // All remaining mass is zero (duplicate points); take the first unchosen slot.
            for (std::size_t i = 0; i < n; ++i)
                if (!chosen[i]) {
                    pick = i;
                    break;
                }
        }
        chosen[pick] = 1;
        centers.push_back(pts[order[pick]]);
    }
    return centers;
}

}  // namespace

void assign_points_serial(const PointSet& points, const PointSet& centroids,
                          std::vector<int>& assignment) {
    assignment.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        assignment[i] = nearest_centroid(points[i], centroids);
}

void assign_points_parallel(const PointSet& points, const PointSet& centroids,
                            std::vector<int>& assignment) {
    assignment.resize(points.size());
    const std::int64_t n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        assignment[i] = nearest_centroid(points[static_cast<std::size_t>(i)], centroids);
}

KMeansResult kmeans(const PointSet& points, const KMeansConfig& cfg) {
    const std::size_t n = points.size();
    if (cfg.k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (static_cast<std::size_t>(cfg.k) > n)
        throw std::invalid_argument("kmeans: k exceeds point count");

    const auto order = canonical_order(points);
    Rng rng(cfg.init_seed);

    KMeansResult res;
    res.centroids = kmeanspp_init(points, order, cfg.k, rng);
    res.assignment.assign(n, 0);

    const int k = cfg.k;
    const int dim = points.dim;
    std::vector<double> sums(static_cast<std::size_t>(k) * dim);
    std::vector<std::size_t> counts(k);

    for (int iter = 0; iter < std::max(1, cfg.max_iters); ++iter) {
        assign_points_parallel(points, res.centroids, res.assignment);

        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            inertia += squared_distance(points[i], res.centroids[res.assignment[i]]);
        res.iteration_inertia.push_back(inertia);
        res.inertia = inertia;
        res.iterations = iter + 1;

        // Update step: accumulate in canonical order for a fixed reduction order.
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), std::size_t{0});
        for (std::size_t slot = 0; slot < n; ++slot) {
            const std::size_t i = order[slot];
            const int j = res.assignment[i];
            auto p = points[i];
            for (int d = 0; d < dim; ++d) sums[static_cast<std::size_t>(j) * dim + d] += p[d];
            ++counts[j];
        }

        PointSet next(dim);
        next.reserve(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) {
            Vec c(dim);
            if (counts[j] > 0)
                for (int d = 0; d < dim; ++d)
                    c[d] = sums[static_cast<std::size_t>(j) * dim + d] / static_cast<double>(counts[j]);
            else
                for (int d = 0; d < dim; ++d) c[d] = res.centroids[j][d];
            next.push_back(c);
        }

        // Re-seed empty clusters to the point farthest from its own centroid.
        bool repaired = false;
        std::vector<char> stolen(n, 0);
        for (int j = 0; j < k; ++j) {
            if (counts[j] > 0) continue;
            double best_d = -1.0;
            std::size_t best_slot = n;
            for (std::size_t slot = 0; slot < n; ++slot) {
                const std::size_t i = order[slot];
                if (stolen[i]) continue;
                const double d = squared_distance(points[i], next[res.assignment[i]]);
                if (d > best_d) {
                    best_d = d;
                    best_slot = slot;
                }
            }
            if (best_slot == n) continue;
            const std::size_t i = order[best_slot];
            stolen[i] = 1;
            for (int d = 0; d < dim; ++d) next.row(j)[d] = points[i][d];
            res.assignment[i] = j;
            repaired = true;
        }

        double shift = 0.0;
        for (int j = 0; j < k; ++j)
            shift = std::max(shift, squared_distance(next[j], res.centroids[j]));
        res.centroids = std::move(next);

        if (!repaired && std::sqrt(shift) < cfg.tol) break;
    }

    // Final pass so assignment matches the returned centroids.
    assign_points_parallel(points, res.centroids, res.assignment);

    // The tie rule in the final pass can still strand a cluster; pin the
    // farthest point onto any empty one so every centroid keeps a member.
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) ++counts[res.assignment[i]];
    std::vector<char> pinned(n, 0);
    for (int j = 0; j < k; ++j) {
        if (counts[j] > 0) continue;
        double best_d = -1.0;
        std::size_t best = n;
        for (std::size_t slot = 0; slot < n; ++slot) {
            const std::size_t i = order[slot];
            if (pinned[i] || counts[res.assignment[i]] <= 1) continue;
            const double d = squared_distance(points[i], res.centroids[res.assignment[i]]);
            if (d > best_d) {
                best_d = d;
                best = i;
            }
        }
        if (best == n) continue;
        --counts[res.assignment[best]];
        for (int d = 0; d < dim; ++d) res.centroids.row(j)[d] = points[best][d];
        res.assignment[best] = j;
        ++counts[j];
        pinned[best] = 1;
    }

    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        inertia += squared_distance(points[i], res.centroids[res.assignment[i]]);
    res.inertia = inertia;

    return res;
}

}  // namespace gfc
