#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gfc/dataset_types.hpp"

namespace gfc {

/// Isotropic Gaussian clusters with labeled ground truth. Cluster centers
/// are placed along the first axis, pairwise `separation` apart.
Dataset generate_blobs(int n_clusters, int points_per_cluster, int d, double spread,
                       double separation, std::uint64_t seed);

/// Generating centers used by generate_blobs, for centroid-error references.
PointSet blob_centers(int n_clusters, int d, double separation);

/// Comma-separated numeric file. A non-numeric first row is treated as a
/// header. label_column (0-based) pulls that column out as class ids.
Dataset load_csv(const std::string& path, std::optional<int> label_column = std::nullopt);

/// Cluster-based non-IID split: all but the last client draw from two
/// k-means clusters apiece; the last client absorbs the remainder.
std::vector<ClientShard> partition_non_iid(const Dataset& data, const PartitionSpec& spec);

/// JSON export of a partition as [{"client_id": ..., "point_indices": [...]}].
std::string partition_to_json(const std::vector<ClientShard>& shards);

}  // namespace gfc
