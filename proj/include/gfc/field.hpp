#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gfc/local.hpp"
#include "gfc/rng.hpp"

namespace gfc {

struct FieldConfig {
    double alpha = 2.0;      // synthetic probe multiplier
    double softening = 0.5;  // additive denominator constant
    double exponent_p = 2.0; // field decay exponent
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (!(alpha > 0.0)) throw std::invalid_argument("FieldConfig: alpha must be > 0");
        if (!(softening > 0.0)) throw std::invalid_argument("FieldConfig: softening must be > 0");
        if (!(exponent_p > 0.0)) throw std::invalid_argument("FieldConfig: exponent_p must be > 0");
    }
};

struct PotentialField {
    PointSet probes;
    std::vector<double> energies;  // aligned with probes
    std::vector<WeightedCentroid> sources;
    std::vector<std::pair<double, double>> bounds;  // per-dimension (min, max)
};

/// Coordinate-wise min/max over source positions. Degenerate dimensions are
/// widened symmetrically by max(1e-6, 1e-3 * global extent).
std::vector<std::pair<double, double>> compute_bounds(const std::vector<WeightedCentroid>& sources);

/// count i.i.d. uniform samples over the box.
PointSet sample_probes(const std::vector<std::pair<double, double>>& bounds, int count, Rng& rng);

/// Sum over sources of mass / (||c - y||^p + softening), in source order.
double energy_at(std::span<const double> y, const std::vector<WeightedCentroid>& sources,
                 double softening, double exponent_p);

/// Energy evaluation kernels over a probe set. The parallel kernel splits
/// over probes with a fixed per-probe source order, so both return
/// bit-identical results.
std::vector<double> evaluate_energies_serial(const PointSet& probes,
                                             const std::vector<WeightedCentroid>& sources,
                                             double softening, double exponent_p);
std::vector<double> evaluate_energies_parallel(const PointSet& probes,
                                               const std::vector<WeightedCentroid>& sources,
                                               double softening, double exponent_p);

/// Probe sampling plus energy evaluation; probe count = max(1, round(alpha * |sources|)).
PotentialField build_field(const std::vector<WeightedCentroid>& sources, const FieldConfig& cfg);

}  // namespace gfc
