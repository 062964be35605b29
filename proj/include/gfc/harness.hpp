#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gfc/dataset.hpp"
#include "gfc/heuristics.hpp"
#include "gfc/metrics.hpp"
#include "gfc/topology.hpp"

namespace gfc {

struct GeneratorConfig {
    int n_clusters = 3;
    int points_per_cluster = 100;
    int dim = 2;
    double spread = 0.5;
    double separation = 10.0;
    std::uint64_t seed = 1;
};

struct CsvConfig {
    std::string path;
    std::optional<int> label_column;
};

struct Overrides {
    std::optional<int> k;                 // local centroids per client
    std::optional<double> softening;      // delta
    std::optional<double> alpha;          // probe multiplier
    std::optional<double> radius;         // neighborhood radius
    std::optional<double> exponent_p;     // field decay
    std::optional<double> delta_sensitivity;
    std::optional<std::string> mass_formula;  // "exp" | "reciprocal"
    std::optional<std::string> direction;     // "superlevel" | "sublevel"
    std::optional<int> max_levels;
    std::optional<int> kmeans_max_iters;
    std::optional<double> kmeans_tol;
};

struct OutputPaths {
    std::string results_csv = "results.csv";
    std::string aggregate_csv = "aggregate.csv";
    std::string manifest_json = "manifest.json";
    std::optional<std::string> merge_tree_json;
};

struct ExperimentConfig {
    std::optional<GeneratorConfig> generator;  // exactly one data source
    std::optional<CsvConfig> csv;
    int num_clients = 10;
    int n_clusters = 3;  // target cluster count n_c
    std::vector<double> epsilons = {1000.0};
    std::vector<std::uint64_t> seeds = {0};
    std::uint64_t master_seed = 0;
    bool baseline = false;  // also run the naive method in sweeps
    Overrides overrides;
    OutputPaths output;

    void validate() const;
};

struct StageTimes {
    double client_ms = 0.0;
    double field_ms = 0.0;
    double topology_ms = 0.0;
    double total_ms = 0.0;
};

struct RunResult {
    std::string method;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> ari;
    std::optional<double> nmi;
    std::optional<double> centroid_err;
    StageTimes times;
    // parameters actually used
    int k = 0;
    double softening = 0.0;
    double alpha = 0.0;
    double radius = 0.0;
    double exponent_p = 2.0;
    double delta_sensitivity = 0.0;
    int n_probes = 0;
    int n_sources = 0;
    int levels_processed = 0;
    std::map<std::string, int> provenance_counts;
    bool sigma2_subsampled = false;
    std::string error;  // non-empty marks an NA row

    std::optional<GlobalCentroids> centroids;  // populated on success
};

struct SweepAggregate {
    std::string method;
    double epsilon = 0.0;
    int n_runs = 0;
    int n_na = 0;
    std::optional<double> ari_mean, ari_std;
    std::optional<double> nmi_mean, nmi_std;
    std::optional<double> err_mean, err_std;
    double wall_ms_mean = 0.0;
};

struct SweepOutput {
    std::vector<RunResult> runs;
    std::vector<SweepAggregate> aggregates;
};

struct ScalingPoint {
    double epsilon = 0.0;
    double mean_centroid_error = 0.0;
};

struct ScalingReport {
    std::vector<ScalingPoint> points;
    double noise_free_floor = 0.0;
    double slope = 0.0;      // log-log slope of (error - floor) vs 1/epsilon
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Materialize the configured data source.
Dataset load_experiment_data(const ExperimentConfig& cfg);

/// Reference centroids for centroid-error scoring, when the generator is the
/// data source (its ground-truth centers).
std::optional<PointSet> reference_centroids(const ExperimentConfig& cfg);

/// One full GFC pipeline run at (epsilon, seed). Never throws for
/// per-run numerical failures; those surface in RunResult::error.
RunResult run_gfc(const ExperimentConfig& cfg, double epsilon, std::uint64_t seed);

/// The deterministic intermediate artifacts of a gfc run, for exports
/// (dump-field, merge-tree JSON). Throws on pipeline failure.
struct PipelineArtifacts {
    PotentialField field;
    MergeTree tree;
    GlobalCentroids centroids;
};
PipelineArtifacts build_pipeline_artifacts(const ExperimentConfig& cfg, double epsilon,
                                           std::uint64_t seed);

/// The exact client partition a run at `seed` uses, as reproducibility JSON.
std::string partition_json_for(const ExperimentConfig& cfg, std::uint64_t seed);

/// Same client phase, but the server runs plain k-means with k = n_c over
/// the uploaded centroid positions (masses ignored).
RunResult run_baseline_naive(const ExperimentConfig& cfg, double epsilon, std::uint64_t seed);

/// Cartesian product over epsilons x seeds x methods, aggregated per cell.
SweepOutput run_sweep(const ExperimentConfig& cfg);

/// Mean matched centroid error per epsilon plus the log-log regression slope
/// against 1/epsilon, with the noise-free floor (epsilon = 1e6) subtracted.
ScalingReport epsilon_scaling_report(const ExperimentConfig& cfg);

std::string results_csv(const std::vector<RunResult>& runs);
std::string aggregate_csv(const std::vector<SweepAggregate>& aggregates);
std::string run_manifest_json(const ExperimentConfig& cfg, const std::vector<RunResult>& runs);
std::string config_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

}  // namespace gfc
