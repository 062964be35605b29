#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gfc/harness.hpp"
#include "json.hpp"

using namespace gfc;

namespace {

ExperimentConfig blob_config() {
    ExperimentConfig cfg;
    cfg.generator = GeneratorConfig{3, 100, 2, 0.5, 10.0, 1};
    cfg.num_clients = 10;
    cfg.n_clusters = 3;
    cfg.master_seed = 7;
    return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("run_gfc: pipeline produces scored results and stage times") {
    const auto cfg = blob_config();
    const RunResult r = run_gfc(cfg, 1000.0, 0);
    REQUIRE(r.error.empty());
    REQUIRE(r.ari.has_value());
    REQUIRE(r.nmi.has_value());
    REQUIRE(r.centroid_err.has_value());
    CHECK(*r.ari >= -1.0);
    CHECK(*r.ari <= 1.0);
    CHECK(*r.nmi >= 0.0);
    CHECK(*r.nmi <= 1.0 + 1e-12);
    CHECK(r.k == 16);  // heuristic k for n=300
    // every client uploads min(k, shard size) centroids
    CHECK(r.n_sources >= cfg.num_clients);
    CHECK(r.n_sources <= cfg.num_clients * r.k);
    CHECK(r.n_probes > 0);
    CHECK(r.times.total_ms > 0.0);
    REQUIRE(r.centroids.has_value());
    CHECK(r.centroids->centroids.size() == 3);
    int prov_total = 0;
    for (const auto& [name, count] : r.provenance_counts) prov_total += count;
    CHECK(prov_total == 3);
}

TEST_CASE("run_gfc: n_c=1 yields constant prediction and zero ARI") {
    auto cfg = blob_config();
    cfg.n_clusters = 1;
    const RunResult r = run_gfc(cfg, 1000.0, 0);
    REQUIRE(r.error.empty());
    REQUIRE(r.ari.has_value());
    CHECK(*r.ari == doctest::Approx(0.0));
}

TEST_CASE("run_gfc: deterministic given (config, epsilon, seed)") {
    const auto cfg = blob_config();
    const RunResult a = run_gfc(cfg, 0.5, 3);
    const RunResult b = run_gfc(cfg, 0.5, 3);
    REQUIRE(a.error.empty());
    CHECK(a.ari == b.ari);
    CHECK(a.nmi == b.nmi);
    CHECK(a.centroid_err == b.centroid_err);
    CHECK(a.centroids->centroids.coords == b.centroids->centroids.coords);
}

TEST_CASE("run_gfc: privacy degrades accuracy on average over 20 seeds") {
    const auto cfg = blob_config();
    double clean = 0.0, noisy = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        clean += run_gfc(cfg, 1000.0, s).ari.value_or(0.0);
        noisy += run_gfc(cfg, 0.01, s).ari.value_or(0.0);
    }
    CHECK(noisy / 20.0 < clean / 20.0);
}

TEST_CASE("baseline: near-noiseless blobs recovered by the naive server") {
    const auto cfg = blob_config();
    double sum = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        const RunResult r = run_baseline_naive(cfg, 1000.0, s);
        REQUIRE(r.error.empty());
        sum += r.ari.value_or(0.0);
    }
    CHECK(sum / 5.0 >= 0.9);
}

TEST_CASE("baseline: single client with k = n_c approximates centralized k-means") {
    auto cfg = blob_config();
    cfg.num_clients = 1;
    cfg.overrides.k = 3;
    const RunResult r = run_baseline_naive(cfg, 1e6, 0);
    REQUIRE(r.error.empty());

    const Dataset data = load_experiment_data(cfg);
    const auto km = kmeans(data.points, {3, 100, 1e-6, 42});
    const auto pred = assign_labels(data.points, km.centroids);
    const double central_ari = adjusted_rand_index(*data.labels, pred);
    CHECK(r.ari.value_or(0.0) >= 0.95 * central_ari);
}

TEST_CASE("sweep: cartesian counting and aggregate rows") {
    auto cfg = blob_config();
    cfg.generator->points_per_cluster = 30;
    cfg.epsilons = {1000.0, 1.0};
    cfg.seeds = {0, 1, 2};
    cfg.baseline = true;
    const SweepOutput out = run_sweep(cfg);
    CHECK(out.runs.size() == 12);   // 2 eps x 3 seeds x 2 methods
    CHECK(out.aggregates.size() == 4);
    for (const auto& a : out.aggregates) CHECK(a.n_runs == 3);
}

TEST_CASE("sweep: identical seeds give zero std") {
    auto cfg = blob_config();
    cfg.generator->points_per_cluster = 30;
    cfg.epsilons = {1000.0};
    cfg.seeds = {5, 5, 5};
    const SweepOutput out = run_sweep(cfg);
    REQUIRE(out.aggregates.size() == 1);
    REQUIRE(out.aggregates[0].ari_std.has_value());
    CHECK(*out.aggregates[0].ari_std == doctest::Approx(0.0));
}

TEST_CASE("sweep: failing cell becomes NA without corrupting siblings") {
    auto cfg = blob_config();
    cfg.generator->points_per_cluster = 30;
    // n_c exceeds the uploaded centroid count for the naive server (k=1 per
    // client, 3 clients -> 3 positions, n_c = 5): that method fails, gfc
    // still succeeds via probe fallbacks.
    cfg.num_clients = 3;
    cfg.n_clusters = 5;
    cfg.overrides.k = 1;
    cfg.epsilons = {1000.0};
    cfg.seeds = {0};
    cfg.baseline = true;
    const SweepOutput out = run_sweep(cfg);
    REQUIRE(out.runs.size() == 2);
    const auto& gfc_run = out.runs[0];
    const auto& naive_run = out.runs[1];
    CHECK(gfc_run.method == "gfc");
    CHECK(gfc_run.error.empty());
    CHECK(naive_run.method == "naive");
    CHECK_FALSE(naive_run.error.empty());
    for (const auto& a : out.aggregates) {
        if (a.method == "naive") CHECK(a.n_na == 1);
        if (a.method == "gfc") CHECK(a.n_na == 0);
    }
}

TEST_CASE("sweep: byte-identical CSV across repeated runs") {
    auto cfg = blob_config();
    cfg.generator->points_per_cluster = 30;
    cfg.epsilons = {1000.0, 0.5};
    cfg.seeds = {0, 1};
    cfg.baseline = true;
    // wall-clock columns (7-10) are the only nondeterministic content
    auto strip_timings = [](const std::string& csv) {
        std::stringstream in(csv);
        std::string line, out;
        while (std::getline(in, line)) {
            std::stringstream ls(line);
            std::string cell;
            int col = 0;
            while (std::getline(ls, cell, ',')) {
                if (col < 6 || col > 9) out += cell + ",";
                ++col;
            }
            out += "\n";
        }
        return out;
    };
    const std::string a = strip_timings(results_csv(run_sweep(cfg).runs));
    const std::string b = strip_timings(results_csv(run_sweep(cfg).runs));
    CHECK(a == b);
}

TEST_CASE("results CSV: schema header is stable") {
    const std::string csv = results_csv({});
    std::stringstream ss(csv);
    std::string header;
    std::getline(ss, header);
    for (const char* col :
         {"method", "epsilon", "seed", "ari", "nmi", "centroid_error", "wall_ms", "k", "delta",
          "alpha", "r", "n_probes", "provenance_persistent_leaf", "provenance_isolated_path",
          "provenance_top_energy_leaf", "provenance_top_energy_probe"})
        CHECK(header.find(col) != std::string::npos);
}

TEST_CASE("results CSV: NA rows carry the stage-tagged error") {
    auto cfg = blob_config();
    cfg.generator->points_per_cluster = 30;
    cfg.num_clients = 3;
    cfg.n_clusters = 5;
    cfg.overrides.k = 1;
    const RunResult bad = run_baseline_naive(cfg, 1000.0, 0);
    REQUIRE_FALSE(bad.error.empty());
    const std::string csv = results_csv({bad});
    CHECK(csv.find("NA") != std::string::npos);
    CHECK(csv.find("server-naive") != std::string::npos);
}

TEST_CASE("scaling: single epsilon rejected") {
    auto cfg = blob_config();
    cfg.epsilons = {1.0};
    CHECK_THROWS_AS(epsilon_scaling_report(cfg), std::invalid_argument);
}

TEST_CASE("scaling: noise-free floor matches the non-private pipeline error") {
    auto cfg = blob_config();
    cfg.generator->points_per_cluster = 50;
    cfg.epsilons = {1.0, 0.5};
    cfg.seeds = {0, 1, 2};
    const ScalingReport rep = epsilon_scaling_report(cfg);
    double floor_direct = 0.0;
    for (std::uint64_t s : cfg.seeds)
        floor_direct += run_gfc(cfg, 1e6, s).centroid_err.value();
    floor_direct /= 3.0;
    CHECK(rep.noise_free_floor == doctest::Approx(floor_direct).epsilon(1e-9));
    CHECK(rep.points.size() == 2);
    CHECK(rep.points[0].mean_centroid_error > 0.0);
}

TEST_CASE("config: JSON round trip and override plumbing") {
    auto cfg = blob_config();
    cfg.overrides.alpha = 5.0;
    cfg.overrides.mass_formula = "reciprocal";
    cfg.overrides.direction = "sublevel";
    cfg.output.merge_tree_json = "tree.json";
    const std::string text = config_json(cfg);
    const ExperimentConfig back = config_from_json(text);
    CHECK(back.generator->points_per_cluster == 100);
    CHECK(back.num_clients == 10);
    CHECK(back.overrides.alpha == 5.0);
    CHECK(*back.overrides.mass_formula == "reciprocal");
    CHECK(*back.overrides.direction == "sublevel");
    CHECK(*back.output.merge_tree_json == "tree.json");
    CHECK(config_json(back) == text);
}

TEST_CASE("config: validation rejects bad shapes") {
    ExperimentConfig cfg;  // no data source
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.generator = GeneratorConfig{};
    cfg.epsilons.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("manifest JSON parses and echoes the config") {
    auto cfg = blob_config();
    cfg.generator->points_per_cluster = 20;
    cfg.epsilons = {1000.0};
    cfg.seeds = {0};
    const SweepOutput out = run_sweep(cfg);
    const auto j = nlohmann::json::parse(run_manifest_json(cfg, out.runs));
    CHECK(j["config"]["num_clients"] == 10);
    REQUIRE(j["runs"].size() == 1);
    CHECK(j["runs"][0]["method"] == "gfc");
    CHECK(j["runs"][0]["params"]["k"].is_number());
}

TEST_CASE("overrides: mass formula and direction flow through the pipeline") {
    auto cfg = blob_config();
    cfg.generator->points_per_cluster = 30;
    cfg.overrides.mass_formula = "reciprocal";
    const RunResult r = run_gfc(cfg, 1000.0, 0);
    CHECK(r.error.empty());

    cfg.overrides.mass_formula.reset();
    cfg.overrides.direction = "sublevel";
    const RunResult r2 = run_gfc(cfg, 1000.0, 0);
    CHECK(r2.error.empty());
    CHECK(r2.centroids->centroids.size() == 3);
}

}  // TEST_SUITE
