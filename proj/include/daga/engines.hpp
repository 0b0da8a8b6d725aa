#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "daga/autoencoder.hpp"
#include "daga/problems.hpp"
#include "daga/selection.hpp"
#include "daga/variation.hpp"

namespace daga {

/// Per-run record. Fitness values use the internal maximization scale;
/// Problem::domain_value maps them back for reporting.
struct TrialResult {
    Individual best;
    std::vector<std::pair<long long, double>> best_fitness_trace;  // (evaluations, fitness)
    std::optional<long long> evals_to_optimum;
    bool success = false;
    std::uint64_t seed = 0;
    long long evaluations = 0;
    long long generations = 0;
};

/// Observer hooks; fire on completed generations only.
struct DagaGenerationView {
    long long generation = 0;
    const Population* population = nullptr;
    const DenoisingAutoencoder* dae = nullptr;
    long long evaluations = 0;
    double train_loss = 0.0;
};

struct DagaConfig {
    std::size_t population = 100;
    double trunc_percent = 10.0;
    int epochs = 10;
    double learning_rate = 0.1;
    double corruption_rate = 0.05;
    std::size_t hidden_size = 10;
    std::optional<RtrSpec> rtr;  // absent: generational replacement with elite copy-in
    SamplerConfig sampler;
    int tournament_k = 2;
    long long max_evaluations = 100000;
    bool reinit_weights = false;       // reinitialize the DA every generation
    std::size_t minibatch_size = 0;    // examples per update; 0 = full batch
    long long max_generations = 0;     // 0 = unlimited
    std::optional<double> stop_fitness;  // optional early-exit threshold (internal scale)

    std::function<void(long long generation, const DenoisingAutoencoder&)> on_before_train;
    std::function<void(const DagaGenerationView&)> on_generation_end;
};

struct GaConfig {
    std::size_t population = 100;
    double crossover_prob = 0.9;
    double mutation_prob = 0.01;    // per allele
    double mutation_sigma_sq = 0.0; // continuous mutation variance
    int tournament_k = 2;
    long long max_evaluations = 100000;
    std::optional<double> stop_fitness;
};

struct EsConfig {
    double initial_sigma = 1.0;
    int adaptation_interval = 0;  // 0: use the problem dimension
    double increase_factor = 1.22;
    double decrease_factor = 0.82;
    long long max_evaluations = 300000;
};

/// One DAGA generation loop: truncation-select unique elites, train the DA,
/// sample offspring through tournament-selected parents, accept via RTR or
/// generational replacement with elites copied in. Creates its own DA seeded
/// from a derived stream so runs continuing an external DA consume the same
/// main-stream draws.
TrialResult daga_run(const Problem& problem, const DagaConfig& cfg, RandomSource& rng);

/// As above but continues (and mutates) an existing autoencoder.
TrialResult daga_run(const Problem& problem, const DagaConfig& cfg, RandomSource& rng,
                     DenoisingAutoencoder& dae);

/// The autoencoder a fresh daga_run would create for this (problem, rng) pair.
DenoisingAutoencoder make_run_autoencoder(const Problem& problem, const DagaConfig& cfg,
                                          const RandomSource& rng);

/// Canonical generational GA: tournament parents, two-point crossover, per-allele
/// mutation, elitism of one.
TrialResult ga_run(const Problem& problem, const GaConfig& cfg, RandomSource& rng);

/// (1+1)-ES with the 1/5 success rule (continuous problems only).
TrialResult es_run(const Problem& problem, const EsConfig& cfg, RandomSource& rng);

/// Swap the segment [cut1, cut2) between two equal-shape genomes.
std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b, std::size_t cut1,
                                              std::size_t cut2);

} // namespace daga
