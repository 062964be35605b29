#include "gfc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"

namespace gfc {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Stage tags for substream derivation. Method-specific stages carry the
// method name, so adding a method never reshuffles existing streams.
constexpr std::uint64_t kStagePartition = 1;
constexpr std::uint64_t kStageClient = 2;
constexpr std::uint64_t kStageKMeans = 3;
constexpr std::uint64_t kStageField = 4;
constexpr std::uint64_t kStageNaive = 5;

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

std::string fmt_opt(const std::optional<double>& x) {
    return x && std::isfinite(*x) ? fmt_double(*x) : std::string("NA");
}

MassFormula parse_mass_formula(const std::string& s) {
    if (s == "exp") return MassFormula::exp;
    if (s == "reciprocal") return MassFormula::reciprocal;
    throw std::invalid_argument("unknown mass_formula: " + s);
}

Direction parse_direction(const std::string& s) {
    if (s == "superlevel") return Direction::superlevel;
    if (s == "sublevel") return Direction::sublevel;
    throw std::invalid_argument("unknown direction: " + s);
}

double max_l1_norm(const PointSet& pts) {
    double m = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) m = std::max(m, l1_norm(pts[i]));
    return m;
}

struct ClientUpload {
    std::vector<WeightedCentroid> sources;
    bool sigma2_subsampled = false;
    int k_used = 0;
};

// Shared client phase for every method: partition, privatize, local k-means,
// masses. Method-independent by construction.
ClientUpload run_client_side(const ExperimentConfig& cfg, const Dataset& data, double epsilon,
                             std::uint64_t seed, double delta_sensitivity, double softening) {
    const std::uint64_t eps_bits = hash_double_bits(epsilon);

    PartitionSpec pspec;
    pspec.num_clients = cfg.num_clients;
    pspec.n_clusters = data.labels ? data.n_classes() : cfg.n_clusters;
    pspec.rng_seed = derive_seed(cfg.master_seed, {kStagePartition, seed});
    const auto shards = partition_non_iid(data, pspec);

    PrivacyParams privacy;
    privacy.epsilon = epsilon;
    privacy.delta_sensitivity = delta_sensitivity;

    const int k_requested =
        cfg.overrides.k ? *cfg.overrides.k : heuristic_k(static_cast<long long>(data.size()));

    ClientPhaseOptions opts;
    opts.mass_formula = cfg.overrides.mass_formula
                            ? parse_mass_formula(*cfg.overrides.mass_formula)
                            : MassFormula::exp;
    opts.reciprocal_softening = softening;

    // Client phases are independent; run them in parallel with per-client
    // substreams and collect into fixed slots so the upload order (and hence
    // every downstream result) does not depend on scheduling.
    const int n_clients = static_cast<int>(shards.size());
    std::vector<std::vector<WeightedCentroid>> per_client(n_clients);
    std::vector<char> subsampled(n_clients, 0);
    std::vector<std::string> errors(n_clients);

#pragma omp parallel for schedule(dynamic)
    for (int ci = 0; ci < n_clients; ++ci) {
        try {
            const auto& shard = shards[ci];
            const std::uint64_t c = static_cast<std::uint64_t>(shard.client_id);
            KMeansConfig kcfg;
            kcfg.k = std::clamp<int>(k_requested, 1, static_cast<int>(shard.points.size()));
            kcfg.max_iters = cfg.overrides.kmeans_max_iters.value_or(100);
            kcfg.tol = cfg.overrides.kmeans_tol.value_or(1e-6);
            kcfg.init_seed = derive_seed(cfg.master_seed, {kStageKMeans, seed, eps_bits, c});

            Rng rng(derive_seed(cfg.master_seed, {kStageClient, seed, eps_bits, c}));
            bool sub = false;
            per_client[ci] = client_phase(shard, privacy, kcfg, rng, std::nullopt, opts, &sub);
            subsampled[ci] = sub ? 1 : 0;
        } catch (const std::exception& e) {
            errors[ci] = e.what();
        }
    }

    ClientUpload up;
    up.k_used = k_requested;
    for (int ci = 0; ci < n_clients; ++ci) {
        if (!errors[ci].empty())
            throw std::runtime_error("client " + std::to_string(ci) + ": " + errors[ci]);
        up.sigma2_subsampled = up.sigma2_subsampled || subsampled[ci];
        up.sources.insert(up.sources.end(), per_client[ci].begin(), per_client[ci].end());
    }
    return up;
}

void score_run(RunResult& res, const Dataset& data, const std::optional<PointSet>& reference,
               const PointSet& centroids) {
    const auto pred = assign_labels(data.points, centroids);
    if (data.labels) {
        const double ari = adjusted_rand_index(*data.labels, pred);
        if (std::isfinite(ari)) res.ari = ari;
        const double nmi = normalized_mutual_information(*data.labels, pred);
        if (std::isfinite(nmi)) res.nmi = nmi;
    }
    if (reference && reference->size() == centroids.size() && reference->dim == centroids.dim)
        res.centroid_err = centroid_error(centroids, *reference);
}

struct GfcServerArtifacts {
    PotentialField field;
    MergeTree tree;
    GlobalCentroids centroids;
};

// The server side of a gfc run; fills parameter/timing fields of `res`.
GfcServerArtifacts run_gfc_server(const ExperimentConfig& cfg, const ClientUpload& up,
                                  double epsilon, std::uint64_t seed, RunResult& res) {
    const std::uint64_t eps_bits = hash_double_bits(epsilon);

    const auto t_field = Clock::now();
    FieldConfig fcfg;
    fcfg.alpha = res.alpha;
    fcfg.softening = res.softening;
    fcfg.exponent_p = res.exponent_p;
    fcfg.rng_seed = derive_seed(cfg.master_seed, {kStageField, seed, eps_bits});
    GfcServerArtifacts art;
    art.field = build_field(up.sources, fcfg);
    res.times.field_ms = ms_since(t_field);
    res.n_probes = static_cast<int>(art.field.probes.size());

    const auto t_topo = Clock::now();
    FiltrationConfig tcfg;
    tcfg.n_clusters = cfg.n_clusters;
    tcfg.radius = res.radius;
    tcfg.max_levels = cfg.overrides.max_levels.value_or(static_cast<int>(std::min<long long>(
        512,
        std::max<long long>(1, std::llround(res.alpha * static_cast<double>(up.sources.size()))))));
    tcfg.direction = cfg.overrides.direction ? parse_direction(*cfg.overrides.direction)
                                             : Direction::superlevel;
    art.tree = build_merge_tree(art.field, tcfg);
    res.levels_processed = art.tree.levels_processed;
    art.centroids = extract_centroids(art.tree, art.field, tcfg);
    res.times.topology_ms = ms_since(t_topo);
    for (Provenance p : art.centroids.provenance) ++res.provenance_counts[provenance_name(p)];
    return art;
}

RunResult run_method(const ExperimentConfig& cfg, const Dataset& data,
                     const std::optional<PointSet>& reference, const std::string& method,
                     double epsilon, std::uint64_t seed) {
    RunResult res;
    res.method = method;
    res.epsilon = epsilon;
    res.seed = seed;
    res.provenance_counts = {{"persistent_leaf", 0},
                             {"isolated_path", 0},
                             {"top_energy_leaf", 0},
                             {"top_energy_probe", 0}};

    const auto t_start = Clock::now();
    std::string stage = "setup";
    try {
        if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
        const std::uint64_t eps_bits = hash_double_bits(epsilon);

        res.delta_sensitivity = cfg.overrides.delta_sensitivity
                                    ? *cfg.overrides.delta_sensitivity
                                    : std::max(max_l1_norm(data.points), 1e-9);
        res.softening = cfg.overrides.softening ? *cfg.overrides.softening
                                                : heuristic_softening(epsilon);
        res.exponent_p = cfg.overrides.exponent_p.value_or(2.0);

        stage = "client";
        const auto t_client = Clock::now();
        const ClientUpload up =
            run_client_side(cfg, data, epsilon, seed, res.delta_sensitivity, res.softening);
        res.times.client_ms = ms_since(t_client);
        res.k = up.k_used;
        res.sigma2_subsampled = up.sigma2_subsampled;
        res.n_sources = static_cast<int>(up.sources.size());

        res.alpha = cfg.overrides.alpha ? *cfg.overrides.alpha : heuristic_alpha(epsilon);
        res.radius = cfg.overrides.radius
                         ? *cfg.overrides.radius
                         : heuristic_all(static_cast<long long>(data.size()), epsilon, up.sources)
                               .radius;

        if (method == "gfc") {
            stage = "server";
            GfcServerArtifacts art = run_gfc_server(cfg, up, epsilon, seed, res);

            stage = "scoring";
            score_run(res, data, reference, art.centroids.centroids);
            res.centroids = std::move(art.centroids);
        } else if (method == "naive") {
            stage = "server-naive";
            const auto t_field = Clock::now();
            if (up.sources.empty()) throw std::runtime_error("no uploaded centroids");
            PointSet positions(static_cast<int>(up.sources[0].position.size()));
            positions.reserve(up.sources.size());
            for (const auto& s : up.sources) positions.push_back(s.position);

            KMeansConfig kcfg;
            kcfg.k = cfg.n_clusters;
            kcfg.max_iters = cfg.overrides.kmeans_max_iters.value_or(100);
            kcfg.tol = cfg.overrides.kmeans_tol.value_or(1e-6);
            kcfg.init_seed = derive_seed(cfg.master_seed, {kStageNaive, seed, eps_bits});
            const KMeansResult km = kmeans(positions, kcfg);
            res.times.field_ms = ms_since(t_field);

            stage = "scoring";
            GlobalCentroids gc;
            gc.centroids = km.centroids;
            gc.provenance.assign(km.centroids.size(), Provenance::top_energy_probe);
            score_run(res, data, reference, gc.centroids);
            res.centroids = std::move(gc);
        } else {
            throw std::invalid_argument("unknown method: " + method);
        }
    } catch (const std::exception& e) {
        res.error = stage + ": " + e.what();
    }
    res.times.total_ms = ms_since(t_start);
    return res;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (generator.has_value() == csv.has_value())
        throw std::invalid_argument("ExperimentConfig: exactly one data source required");
    if (num_clients < 1) throw std::invalid_argument("ExperimentConfig: num_clients must be >= 1");
    if (n_clusters < 1) throw std::invalid_argument("ExperimentConfig: n_clusters must be >= 1");
    if (epsilons.empty()) throw std::invalid_argument("ExperimentConfig: empty epsilon grid");
    if (seeds.empty()) throw std::invalid_argument("ExperimentConfig: empty seed list");
}

Dataset load_experiment_data(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.generator) {
        const auto& g = *cfg.generator;
        return generate_blobs(g.n_clusters, g.points_per_cluster, g.dim, g.spread, g.separation,
                              g.seed);
    }
    return load_csv(cfg.csv->path, cfg.csv->label_column);
}

std::optional<PointSet> reference_centroids(const ExperimentConfig& cfg) {
    if (!cfg.generator) return std::nullopt;
    const auto& g = *cfg.generator;
    return blob_centers(g.n_clusters, g.dim, g.separation);
}

RunResult run_gfc(const ExperimentConfig& cfg, double epsilon, std::uint64_t seed) {
    const Dataset data = load_experiment_data(cfg);
    return run_method(cfg, data, reference_centroids(cfg), "gfc", epsilon, seed);
}

RunResult run_baseline_naive(const ExperimentConfig& cfg, double epsilon, std::uint64_t seed) {
    const Dataset data = load_experiment_data(cfg);
    return run_method(cfg, data, reference_centroids(cfg), "naive", epsilon, seed);
}

std::string partition_json_for(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const Dataset data = load_experiment_data(cfg);
    PartitionSpec pspec;
    pspec.num_clients = cfg.num_clients;
    pspec.n_clusters = data.labels ? data.n_classes() : cfg.n_clusters;
    pspec.rng_seed = derive_seed(cfg.master_seed, {kStagePartition, seed});
    return partition_to_json(partition_non_iid(data, pspec));
}

PipelineArtifacts build_pipeline_artifacts(const ExperimentConfig& cfg, double epsilon,
                                           std::uint64_t seed) {
    cfg.validate();
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    const Dataset data = load_experiment_data(cfg);

    RunResult res;  // parameter resolution scratch, same path as run_gfc
    res.provenance_counts = {{"persistent_leaf", 0},
                             {"isolated_path", 0},
                             {"top_energy_leaf", 0},
                             {"top_energy_probe", 0}};
    res.delta_sensitivity = cfg.overrides.delta_sensitivity
                                ? *cfg.overrides.delta_sensitivity
                                : std::max(max_l1_norm(data.points), 1e-9);
    res.softening =
        cfg.overrides.softening ? *cfg.overrides.softening : heuristic_softening(epsilon);
    res.exponent_p = cfg.overrides.exponent_p.value_or(2.0);

    const ClientUpload up =
        run_client_side(cfg, data, epsilon, seed, res.delta_sensitivity, res.softening);
    res.alpha = cfg.overrides.alpha ? *cfg.overrides.alpha : heuristic_alpha(epsilon);
    res.radius =
        cfg.overrides.radius
            ? *cfg.overrides.radius
            : heuristic_all(static_cast<long long>(data.size()), epsilon, up.sources).radius;

    GfcServerArtifacts art = run_gfc_server(cfg, up, epsilon, seed, res);
    return {std::move(art.field), std::move(art.tree), std::move(art.centroids)};
}

SweepOutput run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const Dataset data = load_experiment_data(cfg);
    const auto reference = reference_centroids(cfg);

    std::vector<std::string> methods = {"gfc"};
    if (cfg.baseline) methods.push_back("naive");

    SweepOutput out;
    for (double eps : cfg.epsilons)
        for (std::uint64_t seed : cfg.seeds)
            for (const auto& method : methods)
                out.runs.push_back(run_method(cfg, data, reference, method, eps, seed));

    for (double eps : cfg.epsilons)
        for (const auto& method : methods) {
            SweepAggregate agg;
            agg.method = method;
            agg.epsilon = eps;
            std::vector<double> aris, nmis, errs;
            double wall = 0.0;
            for (const auto& r : out.runs) {
                if (r.method != method || r.epsilon != eps) continue;
                ++agg.n_runs;
                wall += r.times.total_ms;
                if (!r.error.empty()) {
                    ++agg.n_na;
                    continue;
                }
                if (r.ari) aris.push_back(*r.ari);
                if (r.nmi) nmis.push_back(*r.nmi);
                if (r.centroid_err) errs.push_back(*r.centroid_err);
            }
            auto mean_std = [](const std::vector<double>& v,
                               std::optional<double>& mean_out, std::optional<double>& std_out) {
                if (v.empty()) return;
                const double mean = std::accumulate(v.begin(), v.end(), 0.0) /
                                    static_cast<double>(v.size());
                double var = 0.0;
                for (double x : v) var += (x - mean) * (x - mean);
                var /= static_cast<double>(v.size());
                mean_out = mean;
                std_out = std::sqrt(var);
            };
            mean_std(aris, agg.ari_mean, agg.ari_std);
            mean_std(nmis, agg.nmi_mean, agg.nmi_std);
            mean_std(errs, agg.err_mean, agg.err_std);
            agg.wall_ms_mean = agg.n_runs > 0 ? wall / agg.n_runs : 0.0;
            out.aggregates.push_back(agg);
        }
    return out;
}

ScalingReport epsilon_scaling_report(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!cfg.generator)
        throw std::invalid_argument("epsilon_scaling_report: needs generator ground truth");
    if (cfg.epsilons.size() < 2)
        throw std::invalid_argument("epsilon_scaling_report: needs >= 2 epsilon points");

    const Dataset data = load_experiment_data(cfg);
    const auto reference = reference_centroids(cfg);

    auto mean_error_at = [&](double eps) {
        double sum = 0.0;
        int count = 0;
        for (std::uint64_t seed : cfg.seeds) {
            const RunResult r = run_method(cfg, data, reference, "gfc", eps, seed);
            if (r.error.empty() && r.centroid_err) {
                sum += *r.centroid_err;
                ++count;
            }
        }
        if (count == 0)
            throw std::runtime_error("epsilon_scaling_report: all runs failed at epsilon " +
                                     fmt_double(eps));
        return sum / count;
    };

    ScalingReport rep;
    rep.noise_free_floor = mean_error_at(1e6);
    for (double eps : cfg.epsilons) rep.points.push_back({eps, mean_error_at(eps)});

    std::vector<double> xs, ys;
    for (const auto& p : rep.points) {
        const double excess = p.mean_centroid_error - rep.noise_free_floor;
        if (excess > 0.0) {
            xs.push_back(std::log(1.0 / p.epsilon));
            ys.push_back(std::log(excess));
        }
    }
    if (xs.size() < 2)
        throw std::runtime_error("epsilon_scaling_report: fewer than 2 points above the floor");

    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    rep.slope = sxy / sxx;

    double sse = 0.0;
    const double intercept = my - rep.slope * mx;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + rep.slope * xs[i]);
        sse += e * e;
    }
    double se = 0.0;
    if (xs.size() > 2) se = std::sqrt(sse / (n - 2.0)) / std::sqrt(sxx);
    static const double t_table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                     2.306,  2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
                                     2.131,  2.120, 2.110, 2.101, 2.093, 2.086};
    const std::size_t df = xs.size() - 2;
    const double t = df == 0 ? 0.0 : (df <= 20 ? t_table[df - 1] : 1.96);
    rep.ci_low = rep.slope - t * se;
    rep.ci_high = rep.slope + t * se;
    return rep;
}

std::string results_csv(const std::vector<RunResult>& runs) {
    std::string out =
        "method,epsilon,seed,ari,nmi,centroid_error,wall_ms,client_ms,field_ms,topology_ms,"
        "k,delta,alpha,r,p,delta_sensitivity,n_probes,n_sources,levels,sigma2_subsampled,"
        "provenance_persistent_leaf,provenance_isolated_path,provenance_top_energy_leaf,"
        "provenance_top_energy_probe,error\n";
    for (const auto& r : runs) {
        out += r.method + ',' + fmt_double(r.epsilon) + ',' + std::to_string(r.seed) + ',';
        out += fmt_opt(r.ari) + ',' + fmt_opt(r.nmi) + ',' + fmt_opt(r.centroid_err) + ',';
        out += fmt_double(r.times.total_ms) + ',' + fmt_double(r.times.client_ms) + ',' +
               fmt_double(r.times.field_ms) + ',' + fmt_double(r.times.topology_ms) + ',';
        out += std::to_string(r.k) + ',' + fmt_double(r.softening) + ',' + fmt_double(r.alpha) +
               ',' + fmt_double(r.radius) + ',' + fmt_double(r.exponent_p) + ',' +
               fmt_double(r.delta_sensitivity) + ',';
        out += std::to_string(r.n_probes) + ',' + std::to_string(r.n_sources) + ',' +
               std::to_string(r.levels_processed) + ',' +
               (r.sigma2_subsampled ? "1" : "0") + ',';
        out += std::to_string(r.provenance_counts.at("persistent_leaf")) + ',' +
               std::to_string(r.provenance_counts.at("isolated_path")) + ',' +
               std::to_string(r.provenance_counts.at("top_energy_leaf")) + ',' +
               std::to_string(r.provenance_counts.at("top_energy_probe")) + ',';
        out += r.error.empty() ? "" : r.error;
        out += '\n';
    }
    return out;
}

std::string aggregate_csv(const std::vector<SweepAggregate>& aggregates) {
    std::string out =
        "method,epsilon,n_runs,n_na,ari_mean,ari_std,nmi_mean,nmi_std,"
        "centroid_error_mean,centroid_error_std,wall_ms_mean\n";
    for (const auto& a : aggregates) {
        out += a.method + ',' + fmt_double(a.epsilon) + ',' + std::to_string(a.n_runs) + ',' +
               std::to_string(a.n_na) + ',';
        out += fmt_opt(a.ari_mean) + ',' + fmt_opt(a.ari_std) + ',' + fmt_opt(a.nmi_mean) + ',' +
               fmt_opt(a.nmi_std) + ',' + fmt_opt(a.err_mean) + ',' + fmt_opt(a.err_std) + ',';
        out += fmt_double(a.wall_ms_mean) + '\n';
    }
    return out;
}

namespace {

nlohmann::json overrides_to_json(const Overrides& o) {
    nlohmann::json j = nlohmann::json::object();
    if (o.k) j["k"] = *o.k;
    if (o.softening) j["delta"] = *o.softening;
    if (o.alpha) j["alpha"] = *o.alpha;
    if (o.radius) j["r"] = *o.radius;
    if (o.exponent_p) j["p"] = *o.exponent_p;
    if (o.delta_sensitivity) j["delta_sensitivity"] = *o.delta_sensitivity;
    if (o.mass_formula) j["mass_formula"] = *o.mass_formula;
    if (o.direction) j["direction"] = *o.direction;
    if (o.max_levels) j["max_levels"] = *o.max_levels;
    if (o.kmeans_max_iters) j["kmeans_max_iters"] = *o.kmeans_max_iters;
    if (o.kmeans_tol) j["kmeans_tol"] = *o.kmeans_tol;
    return j;
}

void overrides_from_json(const nlohmann::json& j, Overrides& o) {
    if (j.contains("k")) o.k = j["k"].get<int>();
    if (j.contains("delta")) o.softening = j["delta"].get<double>();
    if (j.contains("alpha")) o.alpha = j["alpha"].get<double>();
    if (j.contains("r")) o.radius = j["r"].get<double>();
    if (j.contains("p")) o.exponent_p = j["p"].get<double>();
    if (j.contains("delta_sensitivity")) o.delta_sensitivity = j["delta_sensitivity"].get<double>();
    if (j.contains("mass_formula")) o.mass_formula = j["mass_formula"].get<std::string>();
    if (j.contains("direction")) o.direction = j["direction"].get<std::string>();
    if (j.contains("max_levels")) o.max_levels = j["max_levels"].get<int>();
    if (j.contains("kmeans_max_iters")) o.kmeans_max_iters = j["kmeans_max_iters"].get<int>();
    if (j.contains("kmeans_tol")) o.kmeans_tol = j["kmeans_tol"].get<double>();
}

}  // namespace

std::string config_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    if (cfg.generator) {
        const auto& g = *cfg.generator;
        j["data"]["generator"] = {{"n_clusters", g.n_clusters},
                                  {"points_per_cluster", g.points_per_cluster},
                                  {"dim", g.dim},
                                  {"spread", g.spread},
                                  {"separation", g.separation},
                                  {"seed", g.seed}};
    }
    if (cfg.csv) {
        j["data"]["csv"]["path"] = cfg.csv->path;
        if (cfg.csv->label_column) j["data"]["csv"]["label_column"] = *cfg.csv->label_column;
    }
    j["num_clients"] = cfg.num_clients;
    j["n_clusters"] = cfg.n_clusters;
    j["epsilons"] = cfg.epsilons;
    j["seeds"] = cfg.seeds;
    j["master_seed"] = cfg.master_seed;
    j["baseline"] = cfg.baseline;
    j["overrides"] = overrides_to_json(cfg.overrides);
    j["output"] = {{"results_csv", cfg.output.results_csv},
                   {"aggregate_csv", cfg.output.aggregate_csv},
                   {"manifest_json", cfg.output.manifest_json}};
    if (cfg.output.merge_tree_json) j["output"]["merge_tree_json"] = *cfg.output.merge_tree_json;
    return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ExperimentConfig cfg;
    if (j.contains("data")) {
        const auto& d = j["data"];
        if (d.contains("generator")) {
            GeneratorConfig g;
            const auto& jg = d["generator"];
            if (jg.contains("n_clusters")) g.n_clusters = jg["n_clusters"].get<int>();
            if (jg.contains("points_per_cluster"))
                g.points_per_cluster = jg["points_per_cluster"].get<int>();
            if (jg.contains("dim")) g.dim = jg["dim"].get<int>();
            if (jg.contains("spread")) g.spread = jg["spread"].get<double>();
            if (jg.contains("separation")) g.separation = jg["separation"].get<double>();
            if (jg.contains("seed")) g.seed = jg["seed"].get<std::uint64_t>();
            cfg.generator = g;
        }
        if (d.contains("csv")) {
            CsvConfig c;
            c.path = d["csv"].at("path").get<std::string>();
            if (d["csv"].contains("label_column"))
                c.label_column = d["csv"]["label_column"].get<int>();
            cfg.csv = c;
        }
    }
    if (j.contains("num_clients")) cfg.num_clients = j["num_clients"].get<int>();
    if (j.contains("n_clusters")) cfg.n_clusters = j["n_clusters"].get<int>();
    if (j.contains("epsilons")) cfg.epsilons = j["epsilons"].get<std::vector<double>>();
    if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("baseline")) cfg.baseline = j["baseline"].get<bool>();
    if (j.contains("overrides")) overrides_from_json(j["overrides"], cfg.overrides);
    if (j.contains("output")) {
        const auto& o = j["output"];
        if (o.contains("results_csv")) cfg.output.results_csv = o["results_csv"].get<std::string>();
        if (o.contains("aggregate_csv"))
            cfg.output.aggregate_csv = o["aggregate_csv"].get<std::string>();
        if (o.contains("manifest_json"))
            cfg.output.manifest_json = o["manifest_json"].get<std::string>();
        if (o.contains("merge_tree_json"))
            cfg.output.merge_tree_json = o["merge_tree_json"].get<std::string>();
    }
    return cfg;
}

std::string run_manifest_json(const ExperimentConfig& cfg, const std::vector<RunResult>& runs) {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(config_json(cfg));
    j["runs"] = nlohmann::json::array();
    for (const auto& r : runs) {
        nlohmann::json e;
        e["method"] = r.method;
        e["epsilon"] = r.epsilon;
        e["seed"] = r.seed;
        e["ari"] = r.ari ? nlohmann::json(*r.ari) : nlohmann::json(nullptr);
        e["nmi"] = r.nmi ? nlohmann::json(*r.nmi) : nlohmann::json(nullptr);
        e["centroid_error"] =
            r.centroid_err ? nlohmann::json(*r.centroid_err) : nlohmann::json(nullptr);
        e["wall_ms"] = r.times.total_ms;
        e["stage_ms"] = {{"client", r.times.client_ms},
                         {"field", r.times.field_ms},
                         {"topology", r.times.topology_ms}};
        e["params"] = {{"k", r.k},
                       {"delta", r.softening},
                       {"alpha", r.alpha},
                       {"r", r.radius},
                       {"p", r.exponent_p},
                       {"delta_sensitivity", r.delta_sensitivity},
                       {"n_probes", r.n_probes},
                       {"n_sources", r.n_sources},
                       {"levels", r.levels_processed},
                       {"sigma2_subsampled", r.sigma2_subsampled}};
        e["provenance"] = r.provenance_counts;
        if (!r.error.empty()) e["error"] = r.error;
        j["runs"].push_back(e);
    }
    return j.dump(2);
}

}  // namespace gfc
