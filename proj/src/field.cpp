#include "gfc/field.hpp"

#include <cmath>

namespace gfc {

std::vector<std::pair<double, double>> compute_bounds(const std::vector<WeightedCentroid>& sources) {
    if (sources.empty()) throw std::invalid_argument("compute_bounds: empty source set");
    const int dim = static_cast<int>(sources[0].position.size());
    std::vector<std::pair<double, double>> box(dim);
    for (int d = 0; d < dim; ++d) box[d] = {sources[0].position[d], sources[0].position[d]};
    for (const auto& s : sources)
        for (int d = 0; d < dim; ++d) {
            box[d].first = std::min(box[d].first, s.position[d]);
            box[d].second = std::max(box[d].second, s.position[d]);
        }

    double extent = 0.0;
    for (const auto& [lo, hi] : box) extent = std::max(extent, hi - lo);
    const double widen = std::max(1e-6, 1e-3 * extent);
    for (auto& [lo, hi] : box)
        if (lo == hi) {
            lo -= widen;
            hi += widen;
        }
    return box;
}

PointSet sample_probes(const std::vector<std::pair<double, double>>& bounds, int count, Rng& rng) {
    if (count < 1) throw std::invalid_argument("sample_probes: count must be >= 1");
    const int dim = static_cast<int>(bounds.size());
    PointSet probes(dim);
    probes.reserve(static_cast<std::size_t>(count));
    Vec p(dim);
    for (int i = 0; i < count; ++i) {
        for (int d = 0; d < dim; ++d) p[d] = rng.uniform(bounds[d].first, bounds[d].second);
        probes.push_back(p);
    }
    return probes;
}

double energy_at(std::span<const double> y, const std::vector<WeightedCentroid>& sources,
                 double softening, double exponent_p) {
    if (!(softening > 0.0)) throw std::invalid_argument("energy_at: softening must be > 0");
    double e = 0.0;
    if (exponent_p == 2.0) {
        for (const auto& s : sources) e += s.mass / (squared_distance(s.position, y) + softening);
    } else {
        const double half_p = exponent_p / 2.0;
        for (const auto& s : sources)
            e += s.mass / (std::pow(squared_distance(s.position, y), half_p) + softening);
    }
    return e;
}

std::vector<double> evaluate_energies_serial(const PointSet& probes,
                                             const std::vector<WeightedCentroid>& sources,
                                             double softening, double exponent_p) {
    std::vector<double> energies(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i)
        energies[i] = energy_at(probes[i], sources, softening, exponent_p);
    return energies;
}

std::vector<double> evaluate_energies_parallel(const PointSet& probes,
                                               const std::vector<WeightedCentroid>& sources,
                                               double softening, double exponent_p) {
    std::vector<double> energies(probes.size());
    const std::int64_t n = static_cast<std::int64_t>(probes.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        energies[static_cast<std::size_t>(i)] =
            energy_at(probes[static_cast<std::size_t>(i)], sources, softening, exponent_p);
    return energies;
}

PotentialField build_field(const std::vector<WeightedCentroid>& sources, const FieldConfig& cfg) {
    cfg.validate();
    if (sources.empty()) throw std::invalid_argument("build_field: empty source set");

    PotentialField field;
    field.sources = sources;
    field.bounds = compute_bounds(sources);

    const int count = static_cast<int>(
        std::max<long long>(1, std::llround(cfg.alpha * static_cast<double>(sources.size()))));
    Rng rng(cfg.rng_seed);
    field.probes = sample_probes(field.bounds, count, rng);
    field.energies = evaluate_energies_parallel(field.probes, sources, cfg.softening, cfg.exponent_p);
    return field;
}

}  // namespace gfc
