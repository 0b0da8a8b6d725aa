// Acceptance suite: one checkable criterion per function, one PASS/FAIL line
// per criterion. Run all criteria or a single one with --criterion N.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "daga/analysis.hpp"
#include "daga/engines.hpp"
#include "daga/ingestion.hpp"
#include "daga/runner.hpp"

using namespace daga;
namespace fs = std::filesystem;

namespace {

std::string source_path(const std::string& rel) {
    return std::string(DAGA_SOURCE_DIR) + "/" + rel;
}

int g_workers = 2;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail += (detail.empty() ? "" : "; ") + what + (ok ? " [ok]" : " [FAILED]");
    }
};

// --- 1. gradient correctness -------------------------------------------------

Outcome criterion_gradient() {
    Outcome out;
    RandomSource rng(20240 + 1);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t visible = 1 + rng.uniform_below(20);
        const std::size_t hidden = 1 + rng.uniform_below(20);
        DenoisingAutoencoder dae(visible, hidden, rng);
        std::vector<double> x(visible);
        const bool binary = trial % 2 == 0;
        for (auto& v : x) v = binary ? (rng.bernoulli(0.5) ? 1.0 : 0.0) : rng.uniform01();
        const LossKind loss = binary ? LossKind::CrossEntropy : LossKind::SquaredError;
        worst = std::max(worst, dae.gradient_check(x, loss, 1e-5));
    }
    out.require(worst < 1e-4, "max relative error " + format_double(worst) + " < 1e-4 over 100 nets, both losses");
    return out;
}

// --- 2. transition-probability demonstration --------------------------------

Outcome criterion_fig1a() {
    Outcome out;
    RandomSource rng(1);
    DenoisingAutoencoder dae(6, 6, rng);
    const std::vector<std::vector<double>> targets = {
        {0, 0, 0, 0, 0, 0}, {0, 0, 0, 1, 1, 1}, {1, 1, 1, 1, 1, 1}};
    TrainConfig cfg;
    cfg.epochs = 2000;
    cfg.learning_rate = 0.5;
    cfg.minibatch_size = 1;
    cfg.corruption = {0.05, CorruptionKind::BitFlip};
    dae.train(targets, cfg, rng);

    const TransitionMatrix m = build_transition_matrix(dae, 6);
    auto top = top_marginals(m, 3);
    std::sort(top.begin(), top.end());
    out.require(top == std::vector<std::size_t>{0, 7, 63},
                "top-3 marginal genomes {" + std::to_string(top[0]) + "," + std::to_string(top[1]) +
                    "," + std::to_string(top[2]) + "} == {0,7,63}");

    double worst_row = 0.0;
    for (std::size_t from = 0; from < 64; ++from) {
        double row = 0.0;
        for (std::size_t to = 0; to < 64; ++to) row += m.at(from, to);
        worst_row = std::max(worst_row, std::fabs(row - 1.0));
    }
    out.require(worst_row < 1e-9, "every transition row sums to 1 within 1e-9 (worst " +
                                      format_double(worst_row) + ")");
    return out;
}

// --- 3. corruption sweep -----------------------------------------------------

Outcome criterion_fig1b() {
    Outcome out;
    const std::vector<double> rates = {0.1, 0.3, 0.5, 0.7, 0.9};
    const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8};
    const auto result = corruption_sweep(rates, seeds);
    const auto means = sweep_rate_means(result);
    std::string shown;
    bool monotone = true;
    for (std::size_t i = 0; i < means.size(); ++i) {
        if (i > 0 && means[i].second > means[i - 1].second) monotone = false;
        shown += (i ? ", " : "") + format_double(means[i].first) + "->" +
                 format_double(means[i].second);
    }
    out.require(monotone,
                "mean offspring distance non-increasing in corruption rate over 8 seeds (" +
                    shown + ")");
    return out;
}

// --- 4. desk-scale masked HIFF -----------------------------------------------

Outcome criterion_hiff() {
    Outcome out;

    // exact oracle cross-check on all 8-bit strings
    const Problem hiff8 = make_hiff(8);
    const std::function<long long(const std::vector<std::uint8_t>&, std::size_t, std::size_t)>
        naive = [&naive](const std::vector<std::uint8_t>& bits, std::size_t lo, std::size_t hi) {
            bool equal = true;
            for (std::size_t i = lo + 1; i < hi; ++i) equal = equal && bits[i] == bits[lo];
            long long score = equal ? static_cast<long long>(hi - lo) : 0;
            if (hi - lo == 1) return score;
            const std::size_t mid = lo + (hi - lo) / 2;
            return score + naive(bits, lo, mid) + naive(bits, mid, hi);
        };
    bool oracle_ok = true;
    for (int v = 0; v < 256; ++v) {
        std::vector<std::uint8_t> bits(8);
        for (int i = 0; i < 8; ++i) bits[static_cast<std::size_t>(i)] = (v >> (7 - i)) & 1;
        oracle_ok = oracle_ok &&
                    hiff8.evaluate(Genome::binary(bits)) == static_cast<double>(naive(bits, 0, 8));
    }
    out.require(oracle_ok, "hiff matches the naive recursive oracle on all 256 8-bit strings");

    // the block formula puts the 64-bit optimum at 64*(log2(64)+1) = 448
    const Problem hiff64 = make_hiff(64);
    out.require(*hiff64.optimum == 448.0, "64-bit block-formula optimum is 448");

    ExperimentConfig cfg = load_experiment_config(source_path("configs/hiff64_daga.cfg"));
    const RunOutput run = run_trials(cfg, g_workers);
    int successes = 0;
    for (const auto& r : run.results) successes += r.success ? 1 : 0;
    out.require(successes >= 8, std::to_string(successes) +
                                    "/10 seeds reach the masked optimum within 200k evaluations (need >= 8)");
    return out;
}

// --- 5. MAXSAT ----------------------------------------------------------------

Outcome criterion_maxsat() {
    Outcome out;
    ExperimentConfig cfg = load_experiment_config(source_path("configs/maxsat_daga.cfg"));
    cfg.stop_best = 427.0;  // the criterion threshold; stop as soon as it is met
    const RunOutput run = run_trials(cfg, g_workers);
    int reached = 0;
    double best = 0.0;
    for (const auto& row : run.rows) {
        if (row.best >= 427.0) ++reached;
        best = std::max(best, row.best);
    }
    out.require(reached >= 8, std::to_string(reached) +
                                  "/10 seeds reach >= 427 of 430 clauses within 500k evaluations (need >= 8)");
    return out;
}

// --- 6. knapsack ---------------------------------------------------------------

Outcome criterion_knapsack() {
    Outcome out;

    // penalty property: exhaustive oracle on small instances
    RandomSource rng(606);
    bool penalty_ok = true;
    for (int instance = 0; instance < 10 && penalty_ok; ++instance) {
        const std::size_t items = 8 + rng.uniform_below(8);  // 8..15
        const std::size_t constraints = 1 + rng.uniform_below(2);
        KnapsackInstance inst;
        for (std::size_t j = 0; j < constraints; ++j) {
            std::vector<double> row;
            for (std::size_t i = 0; i < items; ++i)
                row.push_back(5.0 + static_cast<double>(rng.uniform_below(46)));
            inst.weights.push_back(row);
        }
        for (std::size_t i = 0; i < items; ++i) {
            double weight_sum = 0.0;
            for (std::size_t j = 0; j < constraints; ++j) weight_sum += inst.weights[j][i];
            const double density = 0.5 + static_cast<double>(rng.uniform_below(101)) / 100.0;
            inst.profits.push_back(std::max(1.0, std::round(density * weight_sum)));
        }
        for (std::size_t j = 0; j < constraints; ++j) {
            double row_sum = 0.0, row_max = 0.0;
            for (double w : inst.weights[j]) {
                row_sum += w;
                row_max = std::max(row_max, w);
            }
            inst.capacities.push_back(std::max(row_max, std::round(0.45 * row_sum)));
        }
        const Problem p = make_knapsack(inst);
        double best_feasible = 0.0;
        std::vector<double> infeasible_scores;
        for (std::size_t mask = 0; mask < (std::size_t{1} << items); ++mask) {
            std::vector<std::uint8_t> bits(items);
            for (std::size_t i = 0; i < items; ++i) bits[i] = (mask >> i) & 1;
            bool feasible = true;
            for (std::size_t j = 0; j < constraints; ++j) {
                double load = 0.0;
                for (std::size_t i = 0; i < items; ++i)
                    if (bits[i]) load += inst.weights[j][i];
                feasible = feasible && load <= inst.capacities[j];
            }
            const double f = p.evaluate(Genome::binary(bits));
            if (feasible)
                best_feasible = std::max(best_feasible, f);
            else
                infeasible_scores.push_back(f);
        }
        for (double f : infeasible_scores) penalty_ok = penalty_ok && f < best_feasible;
    }
    out.require(penalty_ok,
                "every infeasible selection scores strictly below the exhaustive feasible optimum");

    ExperimentConfig cfg = load_experiment_config(source_path("configs/knapsack105_daga.cfg"));
    const RunOutput run = run_trials(cfg, g_workers);
    int successes = 0;
    for (const auto& r : run.results) successes += r.success ? 1 : 0;
    out.require(successes >= 1, std::to_string(successes) +
                                    "/10 seeds reach the instance optimum 624319 within 100k evaluations (need >= 1)");

    // every reported best solution must be feasible
    const KnapsackInstance inst =
        parse_knapsack(read_file(source_path("data/knapsack_105x2.txt")));
    bool all_feasible = true;
    for (const auto& r : run.results) {
        for (std::size_t j = 0; j < inst.constraints(); ++j) {
            double load = 0.0;
            for (std::size_t i = 0; i < inst.items(); ++i)
                if (r.best.genome.bits[i]) load += inst.weights[j][i];
            all_feasible = all_feasible && load <= inst.capacities[j];
        }
    }
    out.require(all_feasible, "all reported best solutions are feasible");
    return out;
}

// --- 7. continuous suite --------------------------------------------------------

Outcome criterion_continuous() {
    Outcome out;

    // (a) (1+1)-ES on the 50-d sphere. Reaching 0.1 needs ln(437/0.1) ~ 8.4 nats
    // of progress; the maximal (1+1)-ES progress rate on the sphere is ~0.405/n
    // nats per evaluation, so 1000 evaluations supply at most ~8.1 nats from a
    // median uniform start. The bound below is kept as specified and the miss is
    // expected; see the run summary it prints.
    {
        ExperimentConfig cfg = load_experiment_config(source_path("configs/sphere50_es.cfg"));
        cfg.trials = 1;
        const RunOutput run = run_trials(cfg, 1);
        const auto& r = run.results[0];
        const long long evals = r.evals_to_optimum.value_or(r.evaluations);
        out.require(r.success && evals <= 1000,
                    "(1+1)-ES reaches sphere-50d target 0.1 in " + std::to_string(evals) +
                        " evaluations (bound: 1000)");
    }

    // (b) DAGA reaches 0.05 on the 50-d sphere within 300k evaluations
    {
        ExperimentConfig cfg = load_experiment_config(source_path("configs/sphere50_daga.cfg"));
        cfg.trials = 1;
        cfg.target_override = 0.05;
        const RunOutput run = run_trials(cfg, 1);
        const auto& r = run.results[0];
        out.require(r.success,
                    "DAGA reaches sphere-50d <= 0.05 within 300k evaluations (best " +
                        format_double(run.rows[0].best) + " at " +
                        std::to_string(r.evals_to_optimum.value_or(r.evaluations)) + " evals)");
    }

    // (c) Rastrigin-10d orderings over 5 seeds
    {
        ExperimentConfig daga_cfg =
            load_experiment_config(source_path("configs/rastrigin10_daga.cfg"));
        ExperimentConfig ga_cfg = load_experiment_config(source_path("configs/rastrigin10_ga.cfg"));
        ExperimentConfig es_cfg = load_experiment_config(source_path("configs/rastrigin10_es.cfg"));
        daga_cfg.trials = ga_cfg.trials = es_cfg.trials = 5;
        const RunOutput daga = run_trials(daga_cfg, g_workers);
        const RunOutput ga = run_trials(ga_cfg, g_workers);
        const RunOutput es = run_trials(es_cfg, g_workers);
        out.require(daga.summary.mean_best < ga.summary.mean_best,
                    "rastrigin-10d DAGA mean best " + format_double(daga.summary.mean_best) +
                        " < GA mean best " + format_double(ga.summary.mean_best));
        out.require(es.summary.mean_best > 10.0,
                    "rastrigin-10d ES mean best " + format_double(es.summary.mean_best) + " > 10");
    }
    return out;
}

// --- 8. transfer learning -------------------------------------------------------

Outcome criterion_transfer() {
    Outcome out;
    DagaConfig cfg;
    cfg.population = 1000;
    cfg.trunc_percent = 20;
    cfg.epochs = 10;
    cfg.learning_rate = 1e-4;
    cfg.corruption_rate = 0.1;
    cfg.hidden_size = 70;
    cfg.minibatch_size = 1;
    cfg.max_evaluations = 3000000;

    const PatternTarget box = box_pattern();
    const PatternTarget cross = cross_pattern();

    const SpeedupRecord bx = transfer_experiment({box, cross, cross}, cfg, 10, 1);
    out.require(bx.speedup > 0.0, "box,cross then cross again: speedup " +
                                      format_double(bx.speedup) + " generations > 0 over 10 trials");
    const SpeedupRecord xb = transfer_experiment({cross, box, box}, cfg, 10, 1);
    out.require(xb.speedup > 0.0, "cross,box then box again: speedup " +
                                      format_double(xb.speedup) + " generations > 0 over 10 trials");
    return out;
}

// --- 9. rank-sum oracle ----------------------------------------------------------

double pairwise_permutation_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n = a.size(), total_n = pooled.size();
    const auto pairwise_u = [&pooled, total_n](std::uint32_t mask) {
        double u = 0.0;
        for (std::size_t i = 0; i < total_n; ++i) {
            if (!((mask >> i) & 1)) continue;
            for (std::size_t j = 0; j < total_n; ++j) {
                if ((mask >> j) & 1) continue;
                if (pooled[i] > pooled[j])
                    u += 1.0;
                else if (pooled[i] == pooled[j])
                    u += 0.5;
            }
        }
        return u;
    };
    std::uint32_t observed = 0;
    for (std::size_t i = 0; i < n; ++i) observed |= 1u << i;
    const double mean_u = static_cast<double>(n) * static_cast<double>(total_n - n) / 2.0;
    const double dev = std::fabs(pairwise_u(observed) - mean_u);
    long long hits = 0, count = 0;
    for (std::uint32_t mask = 0; mask < (1u << total_n); ++mask) {
        if (std::popcount(mask) != static_cast<int>(n)) continue;
        ++count;
        if (std::fabs(pairwise_u(mask) - mean_u) >= dev) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(count);
}

Outcome criterion_ranksum() {
    Outcome out;
    RandomSource rng(909);
    bool agree = true;
    int checked = 0;
    for (std::size_t n = 3; n <= 9 && agree; ++n) {
        for (std::size_t m = 3; n + m <= 12 && agree; ++m) {
            for (int repeat = 0; repeat < 12 && agree; ++repeat) {
                std::vector<double> a(n), b(m);
                for (auto& v : a) v = static_cast<double>(rng.uniform_below(6));
                for (auto& v : b)
                    v = static_cast<double>(rng.uniform_below(6)) + (repeat % 3 == 0 ? 2.0 : 0.0);
                agree = rank_sum_test(a, b) == pairwise_permutation_p(a, b);
                ++checked;
            }
        }
    }
    out.require(agree, "rank_sum_test equals exhaustive permutation enumeration on " +
                           std::to_string(checked) + " size/tie combinations with n+m <= 12");
    return out;
}

// --- 10. determinism ---------------------------------------------------------------

Outcome criterion_determinism() {
    Outcome out;
    ExperimentConfig cfg = load_experiment_config(source_path("configs/maxones20_daga.cfg"));

    const auto out_a = (fs::temp_directory_path() / "daga_acceptance_a").string();
    const auto out_b = (fs::temp_directory_path() / "daga_acceptance_b").string();
    const auto out_c = (fs::temp_directory_path() / "daga_acceptance_c").string();
    fs::remove_all(out_a);
    fs::remove_all(out_b);
    fs::remove_all(out_c);

    cfg.output = out_a;
    run_experiment(cfg, 1);  // serial
    cfg.output = out_b;
    run_experiment(cfg, 2);  // parallel
    const std::string csv_a = read_file(out_a + "/results.csv");
    out.require(csv_a == read_file(out_b + "/results.csv"),
                "serial and parallel execution produce byte-identical results.csv");

    ExperimentConfig replay = config_from_manifest(out_a + "/manifest.json");
    replay.output = out_c;
    run_experiment(replay, 2);
    out.require(csv_a == read_file(out_c + "/results.csv"),
                "re-running from the manifest reproduces results.csv byte-identically");

    const auto rows = parse_csv(csv_a);
    int successes = 0;
    for (const auto& r : rows) successes += r.success ? 1 : 0;
    out.require(successes == 10, "smoke config solves 20-bit maxones in 10/10 trials");

    fs::remove_all(out_a);
    fs::remove_all(out_b);
    fs::remove_all(out_c);
    return out;
}

struct Criterion {
    int number;
    const char* name;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "gradient-correctness", criterion_gradient},
    {2, "transition-demonstration", criterion_fig1a},
    {3, "corruption-sweep", criterion_fig1b},
    {4, "desk-scale-hiff", criterion_hiff},
    {5, "maxsat", criterion_maxsat},
    {6, "knapsack", criterion_knapsack},
    {7, "continuous-suite", criterion_continuous},
    {8, "transfer-learning", criterion_transfer},
    {9, "rank-sum-oracle", criterion_ranksum},
    {10, "determinism", criterion_determinism},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc)
            g_workers = std::max(1, std::atoi(argv[++i]));
    }

    int failures = 0;
    for (const auto& criterion : kCriteria) {
        if (only != 0 && criterion.number != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion-%d (%s): %s [%.1f s]\n", outcome.pass ? "PASS" : "FAIL",
                    criterion.number, criterion.name, outcome.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
