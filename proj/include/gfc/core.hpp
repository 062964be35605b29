#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gfc {

using Vec = std::vector<double>;

/// Dense row-major point storage with a fixed dimension.
struct PointSet {
    std::vector<double> coords;  // n * dim values
    int dim = 0;

    PointSet() = default;
    explicit PointSet(int d) : dim(d) {
        if (d < 1) throw std::invalid_argument("PointSet: dimension must be >= 1");
    }

    std::size_t size() const { return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0; }
    bool empty() const { return coords.empty(); }

    std::span<const double> operator[](std::size_t i) const {
        return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
    std::span<double> row(std::size_t i) {
        return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }

    void push_back(std::span<const double> p) {
        if (static_cast<int>(p.size()) != dim) throw std::invalid_argument("PointSet: dimension mismatch");
        coords.insert(coords.end(), p.begin(), p.end());
    }
    void reserve(std::size_t n) { coords.reserve(n * static_cast<std::size_t>(dim)); }

    PointSet gather(std::span<const std::size_t> idx) const {
        PointSet out(dim);
        out.reserve(idx.size());
        for (std::size_t i : idx) out.push_back((*this)[i]);
        return out;
    }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

inline double l1_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

/// Per-dimension (min, max) over a point set; empty input yields an empty box.
inline std::vector<std::pair<double, double>> bounding_box(const PointSet& pts) {
    std::vector<std::pair<double, double>> box;
    if (pts.empty()) return box;
    box.assign(pts.dim, {0.0, 0.0});
    for (int d = 0; d < pts.dim; ++d) box[d] = {pts[0][d], pts[0][d]};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        auto p = pts[i];
        for (int d = 0; d < pts.dim; ++d) {
            box[d].first = std::min(box[d].first, p[d]);
            box[d].second = std::max(box[d].second, p[d]);
        }
    }
    return box;
}

inline double box_diagonal(const std::vector<std::pair<double, double>>& box) {
    double s = 0.0;
    for (const auto& [lo, hi] : box) {
        const double e = hi - lo;
        s += e * e;
    }
    return std::sqrt(s);
}

}  // namespace gfc
