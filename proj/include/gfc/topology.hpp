#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gfc/field.hpp"

namespace gfc {

enum class Direction { superlevel, sublevel };

struct FiltrationConfig {
    int n_clusters = 1;     // target number of global centroids
    double radius = 1.0;    // neighborhood radius for probe connectivity
    int max_levels = 512;   // cap on the threshold sequence length
    Direction direction = Direction::superlevel;

    void validate() const {
        if (n_clusters < 1) throw std::invalid_argument("FiltrationConfig: n_clusters must be >= 1");
        if (!(radius > 0.0)) throw std::invalid_argument("FiltrationConfig: radius must be > 0");
        if (max_levels < 1) throw std::invalid_argument("FiltrationConfig: max_levels must be >= 1");
    }
};

struct TreeNode {
    int node_id = -1;
    std::vector<int> member_probe_indices;  // component snapshot at birth, ascending
    double birth_threshold = 0.0;
    std::optional<double> death_threshold;  // set when merged into a parent
    Vec centroid;                           // energy-weighted mean of members at birth
    double total_energy = 0.0;
    std::vector<int> children;
    int parent = -1;
    bool is_leaf = true;
    int birth_level = -1;
    int death_level = -1;  // -1 while alive

    double persistence(double sweep_end_threshold) const {
        return death_threshold ? std::fabs(*death_threshold - birth_threshold)
                               : std::fabs(birth_threshold - sweep_end_threshold);
    }
};

struct MergeTree {
    std::vector<TreeNode> nodes;
    std::vector<double> thresholds;      // full sequence handed to the sweep
    int levels_processed = 0;            // prefix of thresholds actually swept
    std::vector<int> first_owner;        // per probe: node owning it at activation (-1 inactive)
    std::vector<int> activation_level;   // per probe: level index of activation (-1 inactive)
};

enum class Provenance { persistent_leaf, isolated_path, top_energy_leaf, top_energy_probe };

const char* provenance_name(Provenance p);

struct GlobalCentroids {
    PointSet centroids;  // exactly n_clusters rows
    std::vector<Provenance> provenance;
};

/// Strictly monotone threshold sequence: the distinct energy values when few
/// enough, otherwise level_count evenly spaced quantiles. Descending for
/// superlevel sweeps, ascending for sublevel.
std::vector<double> threshold_sequence(const std::vector<double>& energies, int level_count,
                                       Direction direction);

/// Partition of the given probe indices into maximal sets connected under
/// ||g_a - g_b|| <= radius, via union-find over the radius graph. Components
/// are sorted internally and ordered by smallest member.
std::vector<std::vector<int>> connected_components(std::span<const int> probe_indices,
                                                   const PointSet& positions, double radius);

/// Sweep the thresholds in the configured direction, tracking component
/// births and merges. Stops early once the number of living leaves reaches
/// n_clusters, or when levels run out.
MergeTree build_merge_tree(const PotentialField& field, const FiltrationConfig& cfg);

/// Components of the active probe set at a processed level, reconstructed
/// from the tree only (no distance computations). Same ordering convention
/// as connected_components.
std::vector<std::vector<int>> components_at_level(const MergeTree& tree, int level);

/// Energy-weighted mean of the given probes.
Vec energy_weighted_centroid(std::span<const int> members, const PotentialField& field);

/// The fallback chain guaranteeing exactly n_clusters outputs: persistence-
/// ranked leaves, then energy-ranked leaves, then max-energy probes.
GlobalCentroids extract_centroids(const MergeTree& tree, const PotentialField& field,
                                  const FiltrationConfig& cfg);

/// 1st percentile (nearest-rank) of non-zero pairwise distances between
/// source positions; falls back to 1e-3 * bounds diagonal for fewer than two
/// distinct positions.
double radius_heuristic(const std::vector<WeightedCentroid>& sources);

/// Radius-neighbor lookups for a batch of probes against an active set.
/// Exposed for the parallel-vs-serial kernel checks.
std::vector<std::vector<int>> radius_neighbors_batch(const PointSet& positions,
                                                     std::span<const int> batch,
                                                     std::span<const int> active, double radius,
                                                     bool use_parallel);

std::string merge_tree_to_json(const MergeTree& tree);

}  // namespace gfc
