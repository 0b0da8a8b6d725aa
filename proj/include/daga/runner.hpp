#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "daga/engines.hpp"
#include "daga/ingestion.hpp"
#include "daga/problems.hpp"

namespace daga {

/// Parsed key/value tree: `key = value` lines plus `name { ... }` blocks.
struct ConfigNode {
    std::map<std::string, std::string> values;
    std::map<std::string, ConfigNode> blocks;
};

ConfigNode parse_config_text(const std::string& text);

/// Apply a dotted-path override such as "daga.population=4000".
void apply_override(ConfigNode& node, const std::string& assignment);

/// Canonical re-serialization (sorted keys); hashed into the manifest.
std::string canonical_config_text(const ConfigNode& node);

struct ExperimentConfig {
    std::string problem;   // registry name, e.g. hiff-64, maxsat, sphere-50
    std::string instance;  // data file for maxsat/knapsack/pattern problems
    bool mask = false;     // per-trial random XOR mask
    std::optional<double> optimum_override;  // domain scale
    std::optional<double> target_override;   // domain scale (continuous)
    std::optional<double> stop_best;         // stop once best reaches this (domain scale)
    bool rosenbrock_literal = false;
    std::string algorithm;  // daga | ga | es
    int trials = 1;
    std::uint64_t base_seed = 1;
    std::string output = "out";
    DagaConfig daga;
    GaConfig ga;
    EsConfig es;
    std::string resolved_text;  // canonical config after overrides
};

/// Load + validate a config file. Validation reports every violation at once.
ExperimentConfig load_experiment_config(const std::string& path,
                                        const std::vector<std::string>& overrides = {});
ExperimentConfig experiment_config_from_node(ConfigNode node, const std::string& base_dir);

/// The effective configuration as a canonical tree (what manifests record).
ConfigNode experiment_config_to_node(const ExperimentConfig& cfg);

/// Instantiate the configured problem (parses the instance file if any).
Problem make_problem(const ExperimentConfig& cfg);

struct RunSummary {
    std::string problem;
    std::string algorithm;
    int trials = 0;
    double min_best = 0.0;
    double max_best = 0.0;
    double mean_best = 0.0;
    double std_best = 0.0;
    double mean_evals = 0.0;  // evals to success, budget counted for failures
    double success_rate = 0.0;
};

std::string summary_tsv(const RunSummary& s);

struct RunOutput {
    std::vector<TrialRow> rows;
    std::vector<TrialResult> results;  // by trial index
    RunSummary summary;
};

/// Execute `trials` independent seeded runs (seed = base_seed + index), in
/// parallel when workers > 1. Output is canonicalized by trial index, so serial
/// and parallel execution emit identical bytes.
RunOutput run_trials(const ExperimentConfig& cfg, int workers);

/// run_trials plus results.csv, summary.tsv and manifest.json under cfg.output.
RunOutput run_experiment(const ExperimentConfig& cfg, int workers);

/// Reconstruct the experiment from a manifest written by run_experiment.
ExperimentConfig config_from_manifest(const std::string& manifest_path);

struct ComparisonReport {
    std::string problem;
    RunSummary a;
    RunSummary b;
    double p_best = 1.0;
    double p_evals = 1.0;
    bool best_significant = false;   // p < 0.05
    bool evals_significant = false;
    std::string text;  // rendered report
};

/// Rank-sum comparison of two result sets over the same problem.
ComparisonReport compare_results(const std::vector<TrialRow>& a, const std::vector<TrialRow>& b);

int default_worker_count();

} // namespace daga
