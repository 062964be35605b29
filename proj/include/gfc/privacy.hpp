#pragma once

#include "gfc/core.hpp"
#include "gfc/dataset_types.hpp"
#include "gfc/rng.hpp"

namespace gfc {

struct PrivacyParams {
    double epsilon = 1.0;            // privacy budget
    double delta_sensitivity = 1.0;  // L1 sensitivity bound

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("PrivacyParams: epsilon must be > 0");
        if (!(delta_sensitivity > 0.0))
            throw std::invalid_argument("PrivacyParams: delta_sensitivity must be > 0");
    }

    double noise_scale() const { return delta_sensitivity / epsilon; }
};

/// Rescale a point onto the L1 ball of radius delta_sensitivity when it
/// falls outside; points already within the bound pass through unchanged.
Vec clip_l1(std::span<const double> point, double delta_sensitivity);

/// Clip every point, then perturb each coordinate with independent
/// Laplace(0, delta/epsilon) noise. Labels pass through untouched.
ClientShard privatize(const ClientShard& shard, const PrivacyParams& params, Rng& rng);

}  // namespace gfc
