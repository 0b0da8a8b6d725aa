#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "daga/autoencoder.hpp"
#include "daga/engines.hpp"
#include "daga/problems.hpp"

namespace daga {

/// Exhaustive input-to-output Bernoulli transition table for a binary DA.
/// entries is 2^n x 2^n row-major; row `from` sums to 1. marginal[g] is the
/// column mean over the uniform input distribution.
struct TransitionMatrix {
    std::size_t n = 0;
    std::vector<double> entries;
    std::vector<double> marginal;

    double at(std::size_t from, std::size_t to) const { return entries[(from << n) + to]; }
};

/// Refuses n > 12 (the table grows as 4^n).
TransitionMatrix build_transition_matrix(const DenoisingAutoencoder& dae, std::size_t n);

/// Indices of the k largest marginals, highest first (ties: lower index first).
std::vector<std::size_t> top_marginals(const TransitionMatrix& m, std::size_t k);

Genome genome_from_index(std::size_t index, std::size_t n);
std::size_t genome_index(const Genome& g);

/// Training protocol behind the corruption sweep: a short DAGA run on
/// 20-bit MaxOnes, then probing the trained DA with fixed random inputs.
struct SweepProtocol {
    std::size_t population = 200;
    double trunc_percent = 10.0;  // top 20 of 200
    long long generations = 10;
    int epochs = 5;
    double learning_rate = 0.02;  // weak online training keeps the effect visible
    std::size_t hidden_size = 20;
    std::size_t minibatch_size = 1;
    std::size_t genome_bits = 20;
    std::size_t probes = 100;
};

struct SweepCell {
    double rate = 0.0;
    std::uint64_t seed = 0;
    std::vector<long long> histogram;  // Hamming distance to optimum -> count
    double mean_distance = 0.0;
};

struct CorruptionSweepResult {
    std::vector<SweepCell> cells;     // one per (rate, seed), rate-major order
    std::vector<SweepCell> baseline;  // untrained DA, one per seed
    SweepProtocol protocol;
};

/// Same probe inputs are reused across every rate and seed.
CorruptionSweepResult corruption_sweep(const std::vector<double>& rates,
                                       const std::vector<std::uint64_t>& seeds,
                                       const SweepProtocol& protocol = {});

/// Mean distance per rate across all seeds, in the order of result.cells rates.
std::vector<std::pair<double, double>> sweep_rate_means(const CorruptionSweepResult& result);

/// Per-stage decoder dump: outputs of 18 fixed random inputs.
using TransferDumpSink = std::function<void(const std::string& stage, std::uint64_t seed,
                                            const std::vector<std::vector<double>>& outputs)>;

struct SpeedupRecord {
    std::string third_pattern;
    double mean_iterations_fresh = 0.0;
    double mean_iterations_pretrained = 0.0;
    double speedup = 0.0;  // fresh - pretrained, in generations
    int trials = 0;
    std::vector<long long> fresh_iterations;
    std::vector<long long> pretrained_iterations;
    std::vector<long long> fresh_evaluations;
    std::vector<long long> pretrained_evaluations;
};

/// Solve the three patterns in sequence without reinitialising the DA weights,
/// then solve the third from fresh weights with the same per-trial seed, and
/// report the generation-count speedup.
SpeedupRecord transfer_experiment(const std::array<PatternTarget, 3>& sequence,
                                  const DagaConfig& cfg, int trials, std::uint64_t base_seed,
                                  const TransferDumpSink& sink = nullptr);

/// Stream handed to stage `stage` (0-based) of a transfer trial; the fresh
/// baseline for the third pattern reuses stage 2's stream, so it is
/// exchangeable with a plain daga_run on that stream.
RandomSource transfer_stage_rng(std::uint64_t trial_seed, int stage);

/// Two-sided Wilcoxon-Mann-Whitney p-value. Ties take midranks. The exact
/// subset distribution is used when both sides are <= 10 or n+m <= 12; a
/// tie-corrected normal approximation with continuity correction otherwise.
double rank_sum_test(const std::vector<double>& a, const std::vector<double>& b);

// Plot-ready TSV emission.
std::string transition_matrix_tsv(const TransitionMatrix& m);
std::string marginals_tsv(const TransitionMatrix& m);
std::string sweep_tsv(const CorruptionSweepResult& result);
std::string speedup_tsv(const SpeedupRecord& record);
std::string decoder_dump_tsv(const std::vector<std::vector<double>>& outputs);

} // namespace daga
