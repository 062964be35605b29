#include "gfc/privacy.hpp"

#include <cmath>

namespace gfc {

Vec clip_l1(std::span<const double> point, double delta_sensitivity) {
    if (!(delta_sensitivity > 0.0))
        throw std::invalid_argument("clip_l1: delta_sensitivity must be > 0");
    Vec out(point.begin(), point.end());
    double norm = 0.0;
    for (double x : out) {
        if (!std::isfinite(x)) throw std::invalid_argument("clip_l1: non-finite coordinate");
        norm += std::fabs(x);
    }
    if (norm > delta_sensitivity) {
        const double scale = delta_sensitivity / norm;
        for (double& x : out) x *= scale;
    }
    return out;
}

ClientShard privatize(const ClientShard& shard, const PrivacyParams& params, Rng& rng) {
    params.validate();
    const double b = params.noise_scale();

    ClientShard out;
    out.client_id = shard.client_id;
    out.labels = shard.labels;
    out.point_indices = shard.point_indices;
    out.points = PointSet(shard.points.dim);
    out.points.reserve(shard.points.size());

    for (std::size_t i = 0; i < shard.points.size(); ++i) {
        Vec p = clip_l1(shard.points[i], params.delta_sensitivity);
        for (double& x : p) x += rng.laplace(b);
        out.points.push_back(p);
    }
    return out;
}

}  // namespace gfc
