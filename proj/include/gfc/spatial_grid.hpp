#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "gfc/core.hpp"

namespace gfc {

/// Uniform hash grid over cells of edge `cell`; supports incremental inserts
/// and radius queries against the inserted set. Intended for low dimensions;
/// callers should fall back to a linear scan when dim is large.
class SpatialGrid {
  public:
    SpatialGrid(const PointSet& points, double cell) : points_(points), cell_(cell) {}

    static bool suitable(int dim, double cell) {
        return dim >= 1 && dim <= 4 && cell > 0.0 && std::isfinite(cell);
    }

    void insert(int idx) {
        cells_[key_of(points_[static_cast<std::size_t>(idx)])].push_back(idx);
    }

    /// Indices of inserted points within `radius` of point `idx`, ascending.
    void query(int idx, double radius, std::vector<int>& out) const {
        out.clear();
        const auto p = points_[static_cast<std::size_t>(idx)];
        const double r2 = radius * radius;
        const int dim = points_.dim;
        const int reach = static_cast<int>(std::ceil(radius / cell_));

        std::vector<std::int64_t> base(dim), offset(dim, -reach);
        for (int d = 0; d < dim; ++d) base[d] = coord_cell(p[d]);

        std::vector<std::int64_t> cell(dim);
        while (true) {
            for (int d = 0; d < dim; ++d) cell[d] = base[d] + offset[d];
            const auto it = cells_.find(pack(cell));
            if (it != cells_.end())
                for (int q : it->second)
                    if (squared_distance(points_[static_cast<std::size_t>(q)], p) <= r2)
                        out.push_back(q);
            int d = 0;
            for (; d < dim; ++d) {
                if (++offset[d] <= reach) break;
                offset[d] = -reach;
            }
            if (d == dim) break;
        }
        std::sort(out.begin(), out.end());
    }

  private:
    std::int64_t coord_cell(double x) const {
        return static_cast<std::int64_t>(std::floor(x / cell_));
    }

    std::uint64_t pack(const std::vector<std::int64_t>& cell) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::int64_t c : cell) {
            std::uint64_t u = static_cast<std::uint64_t>(c);
            for (int b = 0; b < 8; ++b) {
                h ^= (u >> (8 * b)) & 0xff;
                h *= 0x100000001b3ULL;
            }
        }
        return h;
    }

    std::uint64_t key_of(std::span<const double> p) const {
        std::vector<std::int64_t> cell(points_.dim);
        for (int d = 0; d < points_.dim; ++d) cell[d] = coord_cell(p[d]);
        return pack(cell);
    }

    const PointSet& points_;
    double cell_;
    std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace gfc
