#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gfc/core.hpp"

namespace gfc {

struct Dataset {
    PointSet points;
    std::optional<std::vector<int>> labels;  // class ids in [0, n_classes)

    int dim() const { return points.dim; }
    std::size_t size() const { return points.size(); }

    int n_classes() const {
        if (!labels || labels->empty()) return 0;
        int m = 0;
        for (int l : *labels) m = std::max(m, l);
        return m + 1;
    }

    void validate() const {
        if (points.dim < 1) throw std::invalid_argument("Dataset: dimension must be >= 1");
        if (labels && labels->size() != points.size())
            throw std::invalid_argument("Dataset: label count differs from point count");
        if (labels)
            for (int l : *labels)
                if (l < 0) throw std::invalid_argument("Dataset: negative label");
    }
};

struct ClientShard {
    int client_id = 0;
    PointSet points;
    std::optional<std::vector<int>> labels;       // evaluation only, never used by the protocol
    std::vector<std::size_t> point_indices;       // positions in the source dataset
};

struct PartitionSpec {
    int num_clients = 1;
    int n_clusters = 1;  // ground-truth class count driving the k-means split
    std::uint64_t rng_seed = 0;
};

}  // namespace gfc
