// Timing comparison of the OpenMP kernels against their serial references.

#include <chrono>
#include <cstdio>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gfc/field.hpp"
#include "gfc/kmeans.hpp"
#include "gfc/topology.hpp"

using namespace gfc;
using Clock = std::chrono::steady_clock;

namespace {

double time_ms(const auto& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }
    return best;
}

PointSet random_points(Rng& rng, int n, int dim, double box) {
    PointSet ps(dim);
    Vec p(dim);
    for (int i = 0; i < n; ++i) {
        for (double& x : p) x = rng.uniform(-box, box);
        ps.push_back(p);
    }
    return ps;
}

std::vector<WeightedCentroid> random_sources(Rng& rng, int n, int dim, double box) {
    std::vector<WeightedCentroid> out(n);
    for (auto& s : out) {
        s.position.resize(dim);
        for (double& x : s.position) x = rng.uniform(-box, box);
        s.mass = rng.uniform(0.1, 1.0);
    }
    return out;
}

void row(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx   %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel kernels run serially\n");
#endif
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    Rng rng(1);

    {
        const auto sources = random_sources(rng, 2000, 2, 10.0);
        const auto probes = random_points(rng, 4000, 2, 10.0);
        std::vector<double> a, b;
        const double ts = time_ms([&] { a = evaluate_energies_serial(probes, sources, 0.1, 2.0); });
        const double tp =
            time_ms([&] { b = evaluate_energies_parallel(probes, sources, 0.1, 2.0); });
        row("field energies 4000x2000", ts, tp, a == b);
    }

    {
        const auto points = random_points(rng, 200000, 8, 5.0);
        const auto centroids = random_points(rng, 50, 8, 5.0);
        std::vector<int> a, b;
        const double ts = time_ms([&] { assign_points_serial(points, centroids, a); });
        const double tp = time_ms([&] { assign_points_parallel(points, centroids, b); });
        row("kmeans assign 200k x 50", ts, tp, a == b);
    }

    {
        const auto positions = random_points(rng, 20000, 2, 10.0);
        std::vector<int> all(20000);
        std::iota(all.begin(), all.end(), 0);
        const std::vector<int> batch(all.begin(), all.begin() + 2000);
        const std::vector<int> active(all.begin() + 2000, all.end());
        std::vector<std::vector<int>> a, b;
        const double ts =
            time_ms([&] { a = radius_neighbors_batch(positions, batch, active, 0.5, false); });
        const double tp =
            time_ms([&] { b = radius_neighbors_batch(positions, batch, active, 0.5, true); });
        row("radius neighbors 2k vs 18k", ts, tp, a == b);
    }

    {
        // end-to-end tree build at two scales for the O(m log m) eyeball check
        for (int m : {5000, 10000}) {
            PotentialField f;
            f.probes = random_points(rng, m, 2, 10.0);
            f.energies.resize(m);
            for (double& e : f.energies) e = rng.uniform(0.0, 100.0);
            FiltrationConfig cfg;
            cfg.n_clusters = m + 1;
            cfg.radius = 0.3;
            cfg.max_levels = 512;
            const double t = time_ms([&] { build_merge_tree(f, cfg); }, 1);
            std::printf("merge tree m=%-6d %24.2f ms\n", m, t);
        }
    }
    return 0;
}
