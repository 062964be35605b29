#include "gfc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "gfc/spatial_grid.hpp"
#include "gfc/union_find.hpp"
#include "json.hpp"

namespace gfc {

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::persistent_leaf: return "persistent_leaf";
        case Provenance::isolated_path: return "isolated_path";
        case Provenance::top_energy_leaf: return "top_energy_leaf";
        case Provenance::top_energy_probe: return "top_energy_probe";
    }
    return "unknown";
}

std::vector<double> threshold_sequence(const std::vector<double>& energies, int level_count,
                                       Direction direction) {
    if (energies.empty()) throw std::invalid_argument("threshold_sequence: empty energies");
    if (level_count < 1) throw std::invalid_argument("threshold_sequence: level_count must be >= 1");

    std::vector<double> distinct = energies;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (direction == Direction::superlevel) std::reverse(distinct.begin(), distinct.end());

    const std::size_t s = distinct.size();
    if (s <= static_cast<std::size_t>(level_count)) return distinct;

    // Evenly spaced quantiles over the distinct values, endpoints included.
    std::vector<double> out;
    out.reserve(level_count);
    if (level_count == 1) {
        out.push_back(distinct.front());
        return out;
    }
    for (int i = 0; i < level_count; ++i) {
        const std::size_t idx = static_cast<std::size_t>(
            std::llround(static_cast<double>(i) * static_cast<double>(s - 1) /
                         static_cast<double>(level_count - 1)));
        out.push_back(distinct[idx]);
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::vector<int>> connected_components(std::span<const int> probe_indices,
                                                   const PointSet& positions, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("connected_components: radius must be > 0");
    const std::size_t m = probe_indices.size();
    if (m == 0) return {};

    UnionFind uf(positions.size());
    const double r2 = radius * radius;
    if (SpatialGrid::suitable(positions.dim, radius)) {
        SpatialGrid grid(positions, radius);
        std::vector<int> hits;
        for (std::size_t i = 0; i < m; ++i) {
            grid.query(probe_indices[i], radius, hits);
            for (int q : hits) uf.unite(probe_indices[i], q);
            grid.insert(probe_indices[i]);
        }
    } else {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (squared_distance(positions[static_cast<std::size_t>(probe_indices[i])],
                                     positions[static_cast<std::size_t>(probe_indices[j])]) <= r2)
                    uf.unite(probe_indices[i], probe_indices[j]);
    }

    std::map<int, std::vector<int>> groups;
    for (int idx : probe_indices) groups[uf.find(idx)].push_back(idx);

    std::vector<std::vector<int>> out;
    out.reserve(groups.size());
    for (auto& [root, members] : groups) {
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

std::vector<std::vector<int>> radius_neighbors_batch(const PointSet& positions,
                                                     std::span<const int> batch,
                                                     std::span<const int> active, double radius,
                                                     bool use_parallel) {
    std::vector<std::vector<int>> hits(batch.size());
    const double r2 = radius * radius;
    const std::int64_t nb = static_cast<std::int64_t>(batch.size());
#pragma omp parallel for schedule(static) if (use_parallel)
    for (std::int64_t i = 0; i < nb; ++i) {
        const auto p = positions[static_cast<std::size_t>(batch[i])];
        for (int q : active)
            if (squared_distance(positions[static_cast<std::size_t>(q)], p) <= r2)
                hits[static_cast<std::size_t>(i)].push_back(q);
    }
    return hits;
}

Vec energy_weighted_centroid(std::span<const int> members, const PotentialField& field) {
    const int dim = field.probes.dim;
    Vec mu(dim, 0.0);
    double total = 0.0;
    for (int idx : members) {
        const double e = field.energies[static_cast<std::size_t>(idx)];
        const auto g = field.probes[static_cast<std::size_t>(idx)];
        for (int d = 0; d < dim; ++d) mu[d] += e * g[d];
        total += e;
    }
    if (total != 0.0)
        for (double& x : mu) x /= total;
    return mu;
}

namespace {

bool active_at(double energy, double threshold, Direction dir) {
    return dir == Direction::superlevel ? energy >= threshold : energy <= threshold;
}

}  // namespace

MergeTree build_merge_tree(const PotentialField& field, const FiltrationConfig& cfg) {
    cfg.validate();
    const std::size_t m = field.probes.size();
    if (m == 0) throw std::invalid_argument("build_merge_tree: empty field");

    MergeTree tree;
    tree.thresholds = threshold_sequence(field.energies, cfg.max_levels, cfg.direction);
    tree.first_owner.assign(m, -1);
    tree.activation_level.assign(m, -1);

    // Probes in activation order: by energy along the sweep direction,
    // index ascending on ties.
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    if (cfg.direction == Direction::superlevel)
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (field.energies[a] != field.energies[b]) return field.energies[a] > field.energies[b];
            return a < b;
        });
    else
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (field.energies[a] != field.energies[b]) return field.energies[a] < field.energies[b];
            return a < b;
        });

    UnionFind uf(m);
    const bool use_grid = SpatialGrid::suitable(field.probes.dim, cfg.radius);
    SpatialGrid grid(field.probes, cfg.radius);
    std::vector<int> active;  // activation order
    std::vector<int> alive;   // node ids of living components, kept sorted
    std::vector<int> rep_probe;  // per node: a member probe identifying its component

    std::size_t ptr = 0;
    std::vector<int> batch, hits;

    for (std::size_t li = 0; li < tree.thresholds.size(); ++li) {
        const double h = tree.thresholds[li];

        batch.clear();
        while (ptr < m && active_at(field.energies[order[ptr]], h, cfg.direction)) {
            batch.push_back(order[ptr]);
            ++ptr;
        }

        // Connect each newly active probe to earlier active probes within r.
        if (use_grid) {
            for (int p : batch) {
                grid.query(p, cfg.radius, hits);
                for (int q : hits) uf.unite(p, q);
                grid.insert(p);
            }
        } else {
            // Linear path: neighbor scans against the pre-batch active set run
            // in parallel; within-batch pairs and all unions stay serial.
            const auto batch_hits =
                radius_neighbors_batch(field.probes, batch, active, cfg.radius, true);
            const double r2 = cfg.radius * cfg.radius;
            for (std::size_t bi = 0; bi < batch.size(); ++bi) {
                const int p = batch[bi];
                for (int q : batch_hits[bi]) uf.unite(p, q);
                const auto pp = field.probes[static_cast<std::size_t>(p)];
                for (std::size_t bj = 0; bj < bi; ++bj)
                    if (squared_distance(field.probes[static_cast<std::size_t>(batch[bj])], pp) <=
                        r2)
                        uf.unite(p, batch[bj]);
            }
        }
        for (int p : batch) {
            active.push_back(p);
            tree.activation_level[p] = static_cast<int>(li);
        }

        // Group living nodes by their current union-find root to spot merges.
        std::map<int, std::vector<int>> root_nodes;
        for (int nid : alive) root_nodes[uf.find(rep_probe[nid])].push_back(nid);

        std::unordered_map<int, int> owner;  // root -> alive node id after this level
        owner.reserve(root_nodes.size() + batch.size());
        std::vector<int> next_alive;

        for (auto& [root, group] : root_nodes) {
            if (group.size() == 1) {
                owner[root] = group[0];
                next_alive.push_back(group[0]);
                continue;
            }
            // Merge: the children die here and a parent is born over the
            // full component, newly absorbed probes included.
            std::sort(group.begin(), group.end());
            TreeNode parent;
            parent.node_id = static_cast<int>(tree.nodes.size());
            parent.birth_threshold = h;
            parent.birth_level = static_cast<int>(li);
            parent.is_leaf = false;
            parent.children = group;
            for (int child : group) {
                tree.nodes[child].death_threshold = h;
                tree.nodes[child].death_level = static_cast<int>(li);
                tree.nodes[child].parent = parent.node_id;
            }
            owner[root] = parent.node_id;
            next_alive.push_back(parent.node_id);
            rep_probe.push_back(root);
            tree.nodes.push_back(std::move(parent));
        }

        // Births: fresh components containing only probes never owned before.
        for (int p : batch) {
            const int root = uf.find(p);
            if (owner.count(root)) continue;
            TreeNode leaf;
            leaf.node_id = static_cast<int>(tree.nodes.size());
            leaf.birth_threshold = h;
            leaf.birth_level = static_cast<int>(li);
            leaf.is_leaf = true;
            owner[root] = leaf.node_id;
            next_alive.push_back(leaf.node_id);
            rep_probe.push_back(p);
            tree.nodes.push_back(std::move(leaf));
        }

        // Member snapshots for the nodes born at this level.
        const bool any_born = std::any_of(next_alive.begin(), next_alive.end(), [&](int nid) {
            return tree.nodes[nid].birth_level == static_cast<int>(li);
        });
        if (any_born) {
            std::map<int, std::vector<int>> root_members;
            for (int p : active) {
                const int root = uf.find(p);
                const int nid = owner.at(root);
                if (tree.nodes[nid].birth_level == static_cast<int>(li))
                    root_members[root].push_back(p);
            }
            for (auto& [root, members] : root_members) {
                std::sort(members.begin(), members.end());
                TreeNode& node = tree.nodes[owner.at(root)];
                node.member_probe_indices = members;
                node.centroid = energy_weighted_centroid(members, field);
                node.total_energy = 0.0;
                for (int idx : members)
                    node.total_energy += field.energies[static_cast<std::size_t>(idx)];
            }
        }

        for (int p : batch) tree.first_owner[p] = owner.at(uf.find(p));

        std::sort(next_alive.begin(), next_alive.end());
        alive = std::move(next_alive);
        tree.levels_processed = static_cast<int>(li) + 1;

        int living_leaves = 0;
        for (int nid : alive)
            if (tree.nodes[nid].is_leaf) ++living_leaves;
        if (living_leaves >= cfg.n_clusters) break;
    }

    return tree;
}

std::vector<std::vector<int>> components_at_level(const MergeTree& tree, int level) {
    if (level < 0 || level >= tree.levels_processed)
        throw std::invalid_argument("components_at_level: level out of processed range");

    std::map<int, std::vector<int>> groups;
    for (std::size_t p = 0; p < tree.first_owner.size(); ++p) {
        const int al = tree.activation_level[p];
        if (al < 0 || al > level) continue;
        int nid = tree.first_owner[p];
        while (tree.nodes[nid].death_level != -1 && tree.nodes[nid].death_level <= level)
            nid = tree.nodes[nid].parent;
        groups[nid].push_back(static_cast<int>(p));
    }

    std::vector<std::vector<int>> out;
    out.reserve(groups.size());
    for (auto& [nid, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

namespace {

int min_member(const TreeNode& n) {
    return n.member_probe_indices.empty() ? n.node_id : n.member_probe_indices.front();
}

bool position_taken(const PointSet& taken, std::span<const double> pos, double tol) {
    for (std::size_t i = 0; i < taken.size(); ++i)
        if (euclidean_distance(taken[i], pos) <= tol) return true;
    return false;
}

}  // namespace

GlobalCentroids extract_centroids(const MergeTree& tree, const PotentialField& field,
                                  const FiltrationConfig& cfg) {
    constexpr double kDedupTol = 1e-9;
    const int n_c = cfg.n_clusters;
    const double sweep_end = tree.levels_processed > 0
                                 ? tree.thresholds[static_cast<std::size_t>(tree.levels_processed) - 1]
                                 : 0.0;

    std::vector<int> leaves;
    for (const auto& node : tree.nodes)
        if (node.is_leaf) leaves.push_back(node.node_id);

    // Persistence ranking: undying leaves first, higher persistence first,
    // then lower probe index, then creation order.
    auto persistence_rank = [&](int a, int b) {
        const TreeNode& na = tree.nodes[a];
        const TreeNode& nb = tree.nodes[b];
        const bool ua = !na.death_threshold.has_value();
        const bool ub = !nb.death_threshold.has_value();
        if (ua != ub) return ua;
        const double pa = na.persistence(sweep_end);
        const double pb = nb.persistence(sweep_end);
        if (pa != pb) return pa > pb;
        if (min_member(na) != min_member(nb)) return min_member(na) < min_member(nb);
        return a < b;
    };
    auto energy_rank = [&](int a, int b) {
        const TreeNode& na = tree.nodes[a];
        const TreeNode& nb = tree.nodes[b];
        if (na.total_energy != nb.total_energy) return na.total_energy > nb.total_energy;
        if (min_member(na) != min_member(nb)) return min_member(na) < min_member(nb);
        return a < b;
    };

    GlobalCentroids out;
    out.centroids = PointSet(field.probes.dim);

    auto push = [&](std::span<const double> pos, Provenance prov) {
        if (static_cast<int>(out.centroids.size()) >= n_c) return;
        if (position_taken(out.centroids, pos, kDedupTol)) return;
        out.centroids.push_back(pos);
        out.provenance.push_back(prov);
    };

    if (static_cast<int>(leaves.size()) >= n_c) {
        std::sort(leaves.begin(), leaves.end(), persistence_rank);
        for (int nid : leaves) push(tree.nodes[nid].centroid, Provenance::persistent_leaf);
    } else {
        // Fewer leaves than targets: undying leaves are the isolated paths,
        // dying leaves follow ranked by total energy.
        std::vector<int> undying, dying;
        for (int nid : leaves)
            (tree.nodes[nid].death_threshold ? dying : undying).push_back(nid);
        std::sort(undying.begin(), undying.end(), persistence_rank);
        std::sort(dying.begin(), dying.end(), energy_rank);
        for (int nid : undying) push(tree.nodes[nid].centroid, Provenance::isolated_path);
        for (int nid : dying) push(tree.nodes[nid].centroid, Provenance::top_energy_leaf);
    }

    if (static_cast<int>(out.centroids.size()) < n_c) {
        // Final fallback: max-energy probes not yet represented.
        std::vector<int> probe_order(field.probes.size());
        std::iota(probe_order.begin(), probe_order.end(), 0);
        std::sort(probe_order.begin(), probe_order.end(), [&](int a, int b) {
            if (field.energies[a] != field.energies[b]) return field.energies[a] > field.energies[b];
            return a < b;
        });
        for (int p : probe_order) {
            if (static_cast<int>(out.centroids.size()) >= n_c) break;
            push(field.probes[static_cast<std::size_t>(p)], Provenance::top_energy_probe);
        }
        // All distinct positions exhausted: fill with duplicates by index.
        for (int p : probe_order) {
            if (static_cast<int>(out.centroids.size()) >= n_c) break;
            out.centroids.push_back(field.probes[static_cast<std::size_t>(p)]);
            out.provenance.push_back(Provenance::top_energy_probe);
        }
    }

    if (static_cast<int>(out.centroids.size()) != n_c)
        throw std::runtime_error("extract_centroids: could not produce n_clusters centroids");
    return out;
}

double radius_heuristic(const std::vector<WeightedCentroid>& sources) {
    if (sources.size() < 2)
        throw std::invalid_argument("radius_heuristic: needs at least 2 sources");

    const std::size_t s = sources.size();
    std::vector<double> dists;
    dists.reserve(s * (s - 1) / 2);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j) {
            const double d = euclidean_distance(sources[i].position, sources[j].position);
            if (d > 0.0) dists.push_back(d);
        }

    if (dists.empty()) return 1e-3 * box_diagonal(compute_bounds(sources));

    // Nearest-rank 1st percentile.
    const std::size_t rank =
        std::max<std::size_t>(1, static_cast<std::size_t>(
                                     std::ceil(0.01 * static_cast<double>(dists.size()))));
    std::nth_element(dists.begin(), dists.begin() + (rank - 1), dists.end());
    return dists[rank - 1];
}

std::string merge_tree_to_json(const MergeTree& tree) {
    nlohmann::json j;
    j["levels_processed"] = tree.levels_processed;
    j["thresholds"] = tree.thresholds;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
        nlohmann::json e;
        e["id"] = n.node_id;
        e["birth"] = n.birth_threshold;
        if (n.death_threshold)
            e["death"] = *n.death_threshold;
        else
            e["death"] = nullptr;
        e["centroid"] = n.centroid;
        e["total_energy"] = n.total_energy;
        e["children"] = n.children;
        e["parent"] = n.parent;
        e["is_leaf"] = n.is_leaf;
        e["members"] = n.member_probe_indices;
        j["nodes"].push_back(e);
    }
    return j.dump();
}

}  // namespace gfc
