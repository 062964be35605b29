#pragma once

#include <optional>

#include "gfc/dataset_types.hpp"
#include "gfc/kmeans.hpp"
#include "gfc/privacy.hpp"

namespace gfc {

/// A client-local centroid with its compactness mass; the only artifact
/// that crosses the client -> server boundary.
struct WeightedCentroid {
    Vec position;
    double mass = 1.0;
    int source_client = -1;
    int member_count = 0;
};

enum class MassFormula { exp, reciprocal };

/// exp(-inertia / (2 sigma2)); inertia is the sum of squared distances of
/// the cluster's points to its centroid. Zero inertia yields mass 1.
double cluster_mass(const PointSet& cluster_points, std::span<const double> centroid,
                    double sigma2);

/// 1 / (inertia + softening); the alternative compactness weighting.
double cluster_mass_reciprocal(const PointSet& cluster_points, std::span<const double> centroid,
                               double softening);

/// Population variance of squared pairwise distances over distinct unordered
/// pairs, subsampled to at most 100000 pairs. `subsampled`, when given,
/// reports whether subsampling kicked in.
double client_sigma2(const PointSet& points, Rng rng = Rng(0x5196a2), bool* subsampled = nullptr);

struct ClientPhaseOptions {
    MassFormula mass_formula = MassFormula::exp;
    double reciprocal_softening = 1e-6;  // only used by the reciprocal formula
};

/// The full client phase: privatize, k-means, mass per centroid. sigma2 is
/// taken from the privatized shard unless an override is supplied.
std::vector<WeightedCentroid> client_phase(const ClientShard& shard, const PrivacyParams& privacy,
                                           const KMeansConfig& cfg, Rng rng,
                                           std::optional<double> sigma_override = std::nullopt,
                                           const ClientPhaseOptions& opts = {},
                                           bool* sigma_subsampled = nullptr);

/// Wire format of the single communication round:
/// {"client_id": ..., "centroids": [{"position": [...], "mass": ..., "member_count": ...}]}
std::string centroids_to_json(int client_id, const std::vector<WeightedCentroid>& centroids);
std::vector<WeightedCentroid> centroids_from_json(const std::string& json_text);

}  // namespace gfc
