#include <array>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "daga/analysis.hpp"
#include "daga/ingestion.hpp"
#include "daga/runner.hpp"

namespace fs = std::filesystem;
using namespace daga;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

/// Train the 6-bit demonstration net on the three canonical targets and emit
/// the transition matrix plus marginals.
int run_fig1a(const std::string& out_dir, int epochs, double learning_rate, double corruption,
              std::uint64_t seed) {
    RandomSource rng(seed);
    DenoisingAutoencoder dae(6, 6, rng);
    const std::vector<std::vector<double>> targets = {
        {0, 0, 0, 0, 0, 0}, {0, 0, 0, 1, 1, 1}, {1, 1, 1, 1, 1, 1}};
    TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.learning_rate = learning_rate;
    cfg.minibatch_size = 1;
    cfg.corruption = {corruption, CorruptionKind::BitFlip};
    const double loss = dae.train(targets, cfg, rng);

    const auto matrix = build_transition_matrix(dae, 6);
    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "transition_matrix.tsv").string(),
               transition_matrix_tsv(matrix));
    write_file((fs::path(out_dir) / "marginals.tsv").string(), marginals_tsv(matrix));

    const auto top = top_marginals(matrix, 3);
    std::cout << "final mean loss per component: " << loss << "\n";
    std::cout << "top-3 marginal genomes:";
    for (auto g : top) std::cout << " " << g;
    std::cout << "\nwrote " << out_dir << "/transition_matrix.tsv and marginals.tsv\n";
    return kExitOk;
}

int run_fig1b(const std::vector<double>& rates, int seeds, const std::string& out_dir) {
    std::vector<std::uint64_t> seed_list;
    for (int s = 0; s < seeds; ++s) seed_list.push_back(static_cast<std::uint64_t>(s + 1));
    const auto result = corruption_sweep(rates, seed_list);
    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "corruption_sweep.tsv").string(), sweep_tsv(result));
    std::cout << "rate -> mean Hamming distance to optimum (over " << seeds << " seeds)\n";
    for (const auto& [rate, mean] : sweep_rate_means(result))
        std::cout << "  " << rate << " -> " << mean << "\n";
    std::cout << "wrote " << out_dir << "/corruption_sweep.tsv\n";
    return kExitOk;
}

int run_transfer(const std::string& order, int third, int trials, std::uint64_t seed,
                 const std::string& out_dir, const DagaConfig& cfg) {
    const PatternTarget box = box_pattern();
    const PatternTarget cross = cross_pattern();
    const auto hybrids = make_combined_patterns(box, cross);
    std::array<PatternTarget, 3> sequence;
    if (order == "bx")
        sequence = {box, cross, hybrids[static_cast<std::size_t>(third)]};
    else
        sequence = {cross, box, hybrids[static_cast<std::size_t>(third)]};

    fs::create_directories(out_dir);
    TransferDumpSink sink = [&](const std::string& stage, std::uint64_t trial_seed,
                                const std::vector<std::vector<double>>& outputs) {
        const std::string name = "decoder-" + order + "-seed" + std::to_string(trial_seed) + "-" +
                                 stage + ".tsv";
        write_file((fs::path(out_dir) / name).string(), decoder_dump_tsv(outputs));
    };
    const auto record = transfer_experiment(sequence, cfg, trials, seed, sink);
    const std::string name = "speedup-" + order + "-third" + std::to_string(third) + ".tsv";
    write_file((fs::path(out_dir) / name).string(), speedup_tsv(record));
    std::cout << "order " << order << ", third pattern " << record.third_pattern << ": fresh "
              << record.mean_iterations_fresh << " iterations, pretrained "
              << record.mean_iterations_pretrained << ", speedup " << record.speedup << "\n";
    std::cout << "wrote " << out_dir << "/" << name << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Denoising-autoencoder genetic algorithm workbench"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "Execute a configured experiment");
    std::string run_config, run_manifest;
    std::vector<std::string> run_sets;
    int run_workers = default_worker_count();
    std::string run_output;
    run->add_option("--config", run_config, "Experiment config file");
    run->add_option("--from-manifest", run_manifest, "Re-run a recorded manifest");
    run->add_option("--set", run_sets, "Override a config key, e.g. daga.population=500");
    run->add_option("--workers", run_workers, "Worker threads for trials");
    run->add_option("--output", run_output, "Override the output directory");

    // --- compare ---
    auto* compare = app.add_subcommand("compare", "Rank-sum comparison of two results.csv files");
    std::string cmp_a, cmp_b;
    compare->add_option("a", cmp_a, "First results.csv")->required();
    compare->add_option("b", cmp_b, "Second results.csv")->required();

    // --- validate-config ---
    auto* validate = app.add_subcommand("validate-config", "Check a config and list every problem");
    std::string val_config;
    std::vector<std::string> val_sets;
    validate->add_option("--config", val_config, "Experiment config file")->required();
    validate->add_option("--set", val_sets, "Override a config key");

    // --- analyze ---
    auto* analyze = app.add_subcommand("analyze", "Demonstration experiments");
    analyze->require_subcommand(1);

    auto* fig1a = analyze->add_subcommand("fig1a", "6-bit transition-probability demonstration");
    std::string f1a_out = "out/fig1a";
    int f1a_epochs = 2000;
    double f1a_lr = 0.5, f1a_corruption = 0.05;
    std::uint64_t f1a_seed = 1;
    fig1a->add_option("--out", f1a_out, "Output directory");
    fig1a->add_option("--epochs", f1a_epochs, "Training epochs");
    fig1a->add_option("--learning-rate", f1a_lr, "Learning rate");
    fig1a->add_option("--corruption", f1a_corruption, "Corruption rate");
    fig1a->add_option("--seed", f1a_seed, "Seed");

    auto* fig1b = analyze->add_subcommand("fig1b", "Corruption-rate sweep on 20-bit MaxOnes");
    std::string f1b_out = "out/fig1b";
    std::vector<double> f1b_rates = {0.1, 0.3, 0.5, 0.7, 0.9};
    int f1b_seeds = 5;
    fig1b->add_option("--out", f1b_out, "Output directory");
    fig1b->add_option("--rates", f1b_rates, "Corruption rates");
    fig1b->add_option("--seeds", f1b_seeds, "Seed count");

    auto* transfer = analyze->add_subcommand("transfer", "Sequential pattern transfer experiment");
    std::string tr_out = "out/transfer", tr_order = "bx";
    int tr_third = 15, tr_trials = 10;
    std::uint64_t tr_seed = 1;
    DagaConfig tr_cfg;
    tr_cfg.population = 1000;
    tr_cfg.trunc_percent = 20;
    tr_cfg.epochs = 10;
    tr_cfg.learning_rate = 1e-4;
    tr_cfg.corruption_rate = 0.1;
    tr_cfg.hidden_size = 70;
    tr_cfg.minibatch_size = 1;
    tr_cfg.max_evaluations = 3000000;
    transfer->add_option("--out", tr_out, "Output directory");
    transfer->add_option("--order", tr_order, "Training order: bx (box,cross) or xb")
        ->check(CLI::IsMember({"bx", "xb"}));
    transfer->add_option("--third", tr_third, "Third pattern index (0..15)")
        ->check(CLI::Range(0, 15));
    transfer->add_option("--trials", tr_trials, "Trials");
    transfer->add_option("--seed", tr_seed, "Base seed");
    transfer->add_option("--population", tr_cfg.population, "Population");
    transfer->add_option("--epochs", tr_cfg.epochs, "Training epochs per generation");
    transfer->add_option("--learning-rate", tr_cfg.learning_rate, "Learning rate");
    transfer->add_option("--max-evaluations", tr_cfg.max_evaluations, "Per-stage budget");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            if (run_config.empty() == run_manifest.empty()) {
                std::cerr << "run needs exactly one of --config or --from-manifest\n";
                return kExitConfig;
            }
            ExperimentConfig cfg = run_manifest.empty()
                                       ? load_experiment_config(run_config, run_sets)
                                       : config_from_manifest(run_manifest);
            if (!run_output.empty()) cfg.output = run_output;
            const RunOutput out = run_experiment(cfg, run_workers);
            std::cout << summary_tsv(out.summary);
            std::cout << "wrote " << cfg.output << "/results.csv, summary.tsv, manifest.json\n";
            return kExitOk;
        }
        if (*compare) {
            const auto report =
                compare_results(parse_csv(read_file(cmp_a)), parse_csv(read_file(cmp_b)));
            std::cout << report.text;
            return kExitOk;
        }
        if (*validate) {
            load_experiment_config(val_config, val_sets);
            std::cout << "config ok\n";
            return kExitOk;
        }
        if (*fig1a) return run_fig1a(f1a_out, f1a_epochs, f1a_lr, f1a_corruption, f1a_seed);
        if (*fig1b) return run_fig1b(f1b_rates, f1b_seeds, f1b_out);
        if (*transfer)
            return run_transfer(tr_order, tr_third, tr_trials, tr_seed, tr_out, tr_cfg);
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const InvalidConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
