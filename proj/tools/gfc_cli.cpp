// Command-line front end: single runs, sweeps, ablations, the epsilon
// scaling report, and field dumps for external plotting.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gfc/harness.hpp"
#include "json.hpp"

using namespace gfc;

namespace {

struct CliOptions {
    std::string config_path;
    std::string preset;
    std::string csv_path;
    int label_col = -1;
    bool has_label_col = false;

    std::vector<double> epsilons;
    std::vector<std::uint64_t> seeds;
    int num_clients = -1;
    int n_clusters = -1;
    std::uint64_t master_seed = 0;
    bool master_seed_set = false;
    bool baseline = false;
    std::string out_dir = ".";
    bool print_config = false;
    std::string merge_tree_out;
    std::string partition_out;

    // overrides
    double k = -1, softening = -1, alpha = -1, radius = -1, p = -1, delta_sens = -1;
    std::string mass_formula, direction;
    int max_levels = -1;
};

GeneratorConfig preset_generator(const std::string& name) {
    if (name == "small") return {3, 100, 2, 0.5, 10.0, 1};
    if (name == "medium") return {3, 1000, 2, 0.5, 10.0, 1};
    if (name == "large") return {3, 3334, 2, 0.5, 10.0, 1};
    throw CLI::ValidationError("preset must be one of small|medium|large");
}

ExperimentConfig build_config(const CliOptions& opt) {
    ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) throw std::runtime_error("cannot open config: " + opt.config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = config_from_json(ss.str());
    } else if (opt.csv_path.empty()) {
        cfg.generator = preset_generator(opt.preset.empty() ? "small" : opt.preset);
    }
    if (!opt.preset.empty()) {
        cfg.generator = preset_generator(opt.preset);
        cfg.csv.reset();
    }
    if (!opt.csv_path.empty()) {
        CsvConfig c;
        c.path = opt.csv_path;
        if (opt.has_label_col) c.label_column = opt.label_col;
        cfg.csv = c;
        cfg.generator.reset();
    }
    if (!opt.epsilons.empty()) cfg.epsilons = opt.epsilons;
    if (!opt.seeds.empty()) cfg.seeds = opt.seeds;
    if (opt.num_clients > 0) cfg.num_clients = opt.num_clients;
    if (opt.n_clusters > 0) cfg.n_clusters = opt.n_clusters;
    if (opt.master_seed_set) cfg.master_seed = opt.master_seed;
    if (opt.baseline) cfg.baseline = true;

    if (opt.k > 0) cfg.overrides.k = static_cast<int>(opt.k);
    if (opt.softening > 0) cfg.overrides.softening = opt.softening;
    if (opt.alpha > 0) cfg.overrides.alpha = opt.alpha;
    if (opt.radius > 0) cfg.overrides.radius = opt.radius;
    if (opt.p > 0) cfg.overrides.exponent_p = opt.p;
    if (opt.delta_sens > 0) cfg.overrides.delta_sensitivity = opt.delta_sens;
    if (!opt.mass_formula.empty()) cfg.overrides.mass_formula = opt.mass_formula;
    if (!opt.direction.empty()) cfg.overrides.direction = opt.direction;
    if (opt.max_levels > 0) cfg.overrides.max_levels = opt.max_levels;

    cfg.output.results_csv = opt.out_dir + "/results.csv";
    cfg.output.aggregate_csv = opt.out_dir + "/aggregate.csv";
    cfg.output.manifest_json = opt.out_dir + "/manifest.json";
    if (!opt.merge_tree_out.empty()) cfg.output.merge_tree_json = opt.merge_tree_out;
    return cfg;
}

void write_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

void add_common_flags(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--config", opt.config_path, "JSON config file");
    sub->add_option("--preset", opt.preset, "blob preset: small|medium|large");
    sub->add_option("--csv", opt.csv_path, "CSV data file instead of the generator");
    sub->add_option("--label-col", opt.label_col, "0-based label column in the CSV")
        ->each([&opt](const std::string&) { opt.has_label_col = true; });
    sub->add_option("--epsilon", opt.epsilons, "privacy budget grid");
    sub->add_option("--seed", opt.seeds, "run seeds");
    sub->add_option("--clients", opt.num_clients, "number of simulated clients");
    sub->add_option("--n-clusters", opt.n_clusters, "target global cluster count");
    sub->add_option("--master-seed", opt.master_seed, "master seed for substreams")
        ->each([&opt](const std::string&) { opt.master_seed_set = true; });
    sub->add_flag("--baseline", opt.baseline, "also run the naive aggregation baseline");
    sub->add_option("--out-dir", opt.out_dir, "output directory");
    sub->add_flag("--print-config", opt.print_config, "print the resolved config and exit");
    sub->add_option("--merge-tree-out", opt.merge_tree_out, "write the merge tree JSON here");
    sub->add_option("--partition-out", opt.partition_out,
                    "write the client partition JSON here");

    sub->add_option("--k", opt.k, "override local centroids per client");
    sub->add_option("--delta", opt.softening, "override softening factor");
    sub->add_option("--alpha", opt.alpha, "override synthetic probe multiplier");
    sub->add_option("--radius", opt.radius, "override neighborhood radius");
    sub->add_option("--p", opt.p, "override field decay exponent");
    sub->add_option("--delta-sensitivity", opt.delta_sens, "override L1 sensitivity bound");
    sub->add_option("--mass-formula", opt.mass_formula, "exp|reciprocal");
    sub->add_option("--direction", opt.direction, "superlevel|sublevel");
    sub->add_option("--max-levels", opt.max_levels, "override threshold level cap");
}

int handle_print_config(const CliOptions& opt, const ExperimentConfig& cfg) {
    if (!opt.print_config) return -1;
    std::cout << config_json(cfg) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gravitational federated clustering simulator"};
    app.require_subcommand(1);

    CliOptions run_opt, sweep_opt, ablate_opt, scaling_opt, dump_opt;

    auto* run_cmd = app.add_subcommand("run", "single pipeline run at one (epsilon, seed)");
    add_common_flags(run_cmd, run_opt);
    std::string run_method = "gfc";
    run_cmd->add_option("--method", run_method, "gfc|naive");

    auto* sweep_cmd = app.add_subcommand("sweep", "grid over epsilons x seeds x methods");
    add_common_flags(sweep_cmd, sweep_opt);

    auto* ablate_cmd = app.add_subcommand("ablate", "vary one parameter, others at heuristics");
    add_common_flags(ablate_cmd, ablate_opt);
    std::string ablate_param;
    std::vector<double> ablate_values;
    ablate_cmd->add_option("--param", ablate_param, "alpha|delta|k|clients")->required();
    ablate_cmd->add_option("--values", ablate_values, "values for the varied parameter")
        ->required();

    auto* scaling_cmd = app.add_subcommand("scaling", "epsilon vs centroid-error report");
    add_common_flags(scaling_cmd, scaling_opt);

    auto* dump_cmd = app.add_subcommand("dump-field", "export probe coordinates and energies");
    add_common_flags(dump_cmd, dump_opt);
    std::string dump_format = "csv";
    dump_cmd->add_option("--format", dump_format, "csv|json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const ExperimentConfig cfg = build_config(run_opt);
            if (int rc = handle_print_config(run_opt, cfg); rc >= 0) return rc;
            cfg.validate();
            const double eps = cfg.epsilons.front();
            const std::uint64_t seed = cfg.seeds.front();
            const RunResult r = (run_method == "naive") ? run_baseline_naive(cfg, eps, seed)
                                                        : run_gfc(cfg, eps, seed);
            if (!r.error.empty()) {
                std::cerr << "run failed at stage " << r.error << "\n";
                return 2;
            }
            std::cout << results_csv({r});
            write_file(cfg.output.manifest_json, run_manifest_json(cfg, {r}));
            if (cfg.output.merge_tree_json && r.method == "gfc") {
                const PipelineArtifacts art = build_pipeline_artifacts(cfg, eps, seed);
                write_file(*cfg.output.merge_tree_json, merge_tree_to_json(art.tree));
                std::cout << "wrote " << *cfg.output.merge_tree_json << "\n";
            }
            if (!run_opt.partition_out.empty()) {
                write_file(run_opt.partition_out, partition_json_for(cfg, seed));
                std::cout << "wrote " << run_opt.partition_out << "\n";
            }
            return 0;
        }

        if (sweep_cmd->parsed()) {
            const ExperimentConfig cfg = build_config(sweep_opt);
            if (int rc = handle_print_config(sweep_opt, cfg); rc >= 0) return rc;
            cfg.validate();
            const SweepOutput out = run_sweep(cfg);
            write_file(cfg.output.results_csv, results_csv(out.runs));
            write_file(cfg.output.aggregate_csv, aggregate_csv(out.aggregates));
            write_file(cfg.output.manifest_json, run_manifest_json(cfg, out.runs));
            std::cout << aggregate_csv(out.aggregates);
            std::cout << "wrote " << cfg.output.results_csv << ", " << cfg.output.aggregate_csv
                      << ", " << cfg.output.manifest_json << "\n";
            return 0;
        }

        if (ablate_cmd->parsed()) {
            ExperimentConfig cfg = build_config(ablate_opt);
            if (int rc = handle_print_config(ablate_opt, cfg); rc >= 0) return rc;
            cfg.validate();
            std::vector<RunResult> all;
            std::vector<SweepAggregate> aggs;
            for (double v : ablate_values) {
                ExperimentConfig varied = cfg;
                if (ablate_param == "alpha") varied.overrides.alpha = v;
                else if (ablate_param == "delta") varied.overrides.softening = v;
                else if (ablate_param == "k") varied.overrides.k = static_cast<int>(v);
                else if (ablate_param == "clients") varied.num_clients = static_cast<int>(v);
                else throw std::runtime_error("unknown ablation parameter: " + ablate_param);
                SweepOutput out = run_sweep(varied);
                char tag[64];
                std::snprintf(tag, sizeof(tag), "[%s=%g]", ablate_param.c_str(), v);
                for (auto& r : out.runs) {
                    r.method += tag;
                    all.push_back(std::move(r));
                }
                for (auto& a : out.aggregates) {
                    a.method += tag;
                    aggs.push_back(std::move(a));
                }
            }
            write_file(cfg.output.results_csv, results_csv(all));
            write_file(cfg.output.aggregate_csv, aggregate_csv(aggs));
            write_file(cfg.output.manifest_json, run_manifest_json(cfg, all));
            std::cout << aggregate_csv(aggs);
            return 0;
        }

        if (scaling_cmd->parsed()) {
            const ExperimentConfig cfg = build_config(scaling_opt);
            if (int rc = handle_print_config(scaling_opt, cfg); rc >= 0) return rc;
            cfg.validate();
            const ScalingReport rep = epsilon_scaling_report(cfg);
            std::string csv = "epsilon,mean_centroid_error\n";
            for (const auto& p : rep.points) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", p.epsilon,
                              p.mean_centroid_error);
                csv += buf;
            }
            write_file(scaling_opt.out_dir + "/scaling.csv", csv);
            std::printf("noise-free floor: %.6g\n", rep.noise_free_floor);
            std::printf("log-log slope vs 1/epsilon: %.4f  (95%% CI [%.4f, %.4f])\n", rep.slope,
                        rep.ci_low, rep.ci_high);
            std::cout << "wrote " << scaling_opt.out_dir + "/scaling.csv" << "\n";
            return 0;
        }

        if (dump_cmd->parsed()) {
            const ExperimentConfig cfg = build_config(dump_opt);
            if (int rc = handle_print_config(dump_opt, cfg); rc >= 0) return rc;
            cfg.validate();
            const double eps = cfg.epsilons.front();
            const std::uint64_t seed = cfg.seeds.front();
            const PipelineArtifacts art = build_pipeline_artifacts(cfg, eps, seed);
            const PotentialField& field = art.field;

            const std::string base = dump_opt.out_dir + "/field";
            if (dump_format == "json") {
                nlohmann::json j;
                j["bounds"] = nlohmann::json::array();
                for (const auto& [lo, hi] : field.bounds) j["bounds"].push_back({lo, hi});
                j["probes"] = nlohmann::json::array();
                for (std::size_t i = 0; i < field.probes.size(); ++i) {
                    const auto row = field.probes[i];
                    j["probes"].push_back(std::vector<double>(row.begin(), row.end()));
                }
                j["energies"] = field.energies;
                j["sources"] = nlohmann::json::array();
                for (const auto& s : field.sources)
                    j["sources"].push_back({{"position", s.position},
                                            {"mass", s.mass},
                                            {"client", s.source_client}});
                write_file(base + ".json", j.dump(2));
                std::cout << "wrote " << base << ".json\n";
            } else {
                std::string csv;
                for (int d = 0; d < field.probes.dim; ++d) csv += "g" + std::to_string(d) + ",";
                csv += "energy\n";
                char buf[64];
                for (std::size_t i = 0; i < field.probes.size(); ++i) {
                    for (int d = 0; d < field.probes.dim; ++d) {
                        std::snprintf(buf, sizeof(buf), "%.10g,", field.probes[i][d]);
                        csv += buf;
                    }
                    std::snprintf(buf, sizeof(buf), "%.10g\n", field.energies[i]);
                    csv += buf;
                }
                write_file(base + ".csv", csv);
                std::cout << "wrote " << base << ".csv\n";
            }

            if (cfg.output.merge_tree_json) {
                write_file(*cfg.output.merge_tree_json, merge_tree_to_json(art.tree));
                std::cout << "wrote " << *cfg.output.merge_tree_json << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
