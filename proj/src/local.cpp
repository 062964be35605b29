#include "gfc/local.hpp"

#include <cmath>

#include "json.hpp"

namespace gfc {

namespace {

double cluster_inertia(const PointSet& pts, std::span<const double> centroid) {
    if (pts.empty()) throw std::invalid_argument("cluster_mass: empty cluster");
    double inertia = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) inertia += squared_distance(pts[i], centroid);
    return inertia;
}

}  // namespace

double cluster_mass(const PointSet& cluster_points, std::span<const double> centroid,
                    double sigma2) {
    const double inertia = cluster_inertia(cluster_points, centroid);
    if (inertia == 0.0) return 1.0;
    if (!(sigma2 > 0.0)) throw std::invalid_argument("cluster_mass: sigma2 must be > 0");
    return std::exp(-inertia / (2.0 * sigma2));
}

double cluster_mass_reciprocal(const PointSet& cluster_points, std::span<const double> centroid,
                               double softening) {
    if (!(softening > 0.0))
        throw std::invalid_argument("cluster_mass_reciprocal: softening must be > 0");
    return 1.0 / (cluster_inertia(cluster_points, centroid) + softening);
}

double client_sigma2(const PointSet& points, Rng rng, bool* subsampled) {
    constexpr std::size_t kMaxPairs = 100000;
    const std::size_t n = points.size();
    if (subsampled) *subsampled = false;

    const auto box = bounding_box(points);
    const double diag = box_diagonal(box);
    const double floor = 1e-9 * diag * diag;

    if (n < 2) return floor;

    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    const std::size_t total_pairs = n * (n - 1) / 2;
    if (total_pairs <= kMaxPairs) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d2 = squared_distance(points[i], points[j]);
                sum += d2;
                sum_sq += d2 * d2;
                ++count;
            }
    } else {
        if (subsampled) *subsampled = true;
        for (std::size_t t = 0; t < kMaxPairs; ++t) {
            std::size_t i = rng.uniform_index(n);
            std::size_t j = rng.uniform_index(n - 1);
            if (j >= i) ++j;
            const double d2 = squared_distance(points[i], points[j]);
            sum += d2;
            sum_sq += d2 * d2;
            ++count;
        }
    }

    const double mean = sum / static_cast<double>(count);
    const double var = std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean);
    return std::max(var, floor);
}

std::vector<WeightedCentroid> client_phase(const ClientShard& shard, const PrivacyParams& privacy,
                                           const KMeansConfig& cfg, Rng rng,
                                           std::optional<double> sigma_override,
                                           const ClientPhaseOptions& opts,
                                           bool* sigma_subsampled) {
    if (static_cast<std::size_t>(cfg.k) > shard.points.size())
        throw std::invalid_argument("client_phase: k exceeds shard size");

    const ClientShard noisy = privatize(shard, privacy, rng);
    const KMeansResult km = kmeans(noisy.points, cfg);

    double sigma2;
    if (sigma_override) {
        sigma2 = *sigma_override;
        if (sigma_subsampled) *sigma_subsampled = false;
    } else {
        sigma2 = client_sigma2(noisy.points, rng, sigma_subsampled);
    }

    // Collect member points per cluster in input order.
    std::vector<std::vector<std::size_t>> members(cfg.k);
    for (std::size_t i = 0; i < noisy.points.size(); ++i)
        members[km.assignment[i]].push_back(i);

    std::vector<WeightedCentroid> out;
    out.reserve(cfg.k);
    for (int j = 0; j < cfg.k; ++j) {
        const PointSet cluster = noisy.points.gather(members[j]);
        WeightedCentroid wc;
        wc.position.assign(km.centroids[j].begin(), km.centroids[j].end());
        wc.source_client = shard.client_id;
        wc.member_count = static_cast<int>(members[j].size());
        wc.mass = (opts.mass_formula == MassFormula::exp)
                      ? cluster_mass(cluster, km.centroids[j], sigma2)
                      : cluster_mass_reciprocal(cluster, km.centroids[j], opts.reciprocal_softening);
        out.push_back(std::move(wc));
    }
    return out;
}

std::string centroids_to_json(int client_id, const std::vector<WeightedCentroid>& centroids) {
    nlohmann::json j;
    j["client_id"] = client_id;
    j["centroids"] = nlohmann::json::array();
    for (const auto& wc : centroids) {
        nlohmann::json e;
        e["position"] = wc.position;
        e["mass"] = wc.mass;
        e["member_count"] = wc.member_count;
        j["centroids"].push_back(e);
    }
    return j.dump();
}

std::vector<WeightedCentroid> centroids_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    std::vector<WeightedCentroid> out;
    const int client_id = j.at("client_id").get<int>();
    for (const auto& e : j.at("centroids")) {
        WeightedCentroid wc;
        wc.position = e.at("position").get<Vec>();
        wc.mass = e.at("mass").get<double>();
        wc.member_count = e.at("member_count").get<int>();
        wc.source_client = client_id;
        out.push_back(std::move(wc));
    }
    return out;
}

}  // namespace gfc
