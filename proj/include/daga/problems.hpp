#pragma once

#include <array>
#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "daga/genome.hpp"
#include "daga/rng.hpp"

namespace daga {

/// Benchmark fitness definition. evaluate is pure and deterministic and uses the
/// maximization convention; minimization benchmarks negate internally and set
/// `minimizing` so reports can recover the domain value.
struct Problem {
    std::string name;
    GenomeKind kind = GenomeKind::Binary;
    std::size_t length = 0;
    std::vector<double> lower;  // Continuous only, per dimension
    std::vector<double> upper;
    std::function<double(const Genome&)> evaluate;
    std::optional<double> optimum;  // internal fitness scale
    std::optional<double> target;   // internal fitness scale (continuous suite)
    bool minimizing = false;
    // Out-of-bounds evaluations are clamped and counted here (continuous suite).
    std::shared_ptr<std::atomic<long long>> clamp_warnings;

    /// Map an internal fitness back to the problem-domain value.
    double domain_value(double fitness) const { return minimizing ? -fitness : fitness; }
};

/// Per-run evaluation counter wrapped around a problem.
struct Evaluator {
    const Problem* problem = nullptr;
    long long count = 0;

    double evaluate(const Genome& g) {
        ++count;
        return problem->evaluate(g);
    }
};

/// Uniform random population: Bernoulli(0.5) bits or uniform-in-bounds reals,
/// all members evaluated through the counter.
Population init_population(Evaluator& eval, std::size_t capacity, RandomSource& rng);

// --- discrete benchmarks ---

Problem make_maxones(std::size_t n);

/// Hierarchical if-and-only-if: sum over levels l of 2^l per contiguous aligned
/// homogeneous block of size 2^l. Length must be a power of two.
Problem make_hiff(std::size_t n);

/// Per contiguous block of `block` bits: +block if the block is all ones.
Problem make_royal_road(std::size_t n, std::size_t block = 8);

struct CnfClause {
    std::array<int, 3> lits;  // signed 1-based variable indices
};

struct CnfFormula {
    int num_vars = 0;
    std::vector<CnfClause> clauses;
};

/// Count of satisfied clauses.
Problem make_maxsat(CnfFormula cnf, std::optional<double> optimum = std::nullopt);

struct KnapsackInstance {
    std::vector<double> profits;               // per item
    std::vector<std::vector<double>> weights;  // constraint x item
    std::vector<double> capacities;            // per constraint
    std::optional<double> optimum;

    std::size_t items() const { return profits.size(); }
    std::size_t constraints() const { return capacities.size(); }
};

/// Feasible selections score total profit; infeasible ones are penalized per
/// overweight unit at a rate strictly above the best profit density, so every
/// infeasible selection scores below the feasible optimum.
Problem make_knapsack(KnapsackInstance inst);

// --- continuous benchmarks (minimization; evaluate returns the negated value) ---

Problem make_sphere(std::size_t n, double target = 0.1);
/// `literal_plus_term` switches the (1 - p_i)^2 term to (1 + p_i)^2.
Problem make_rosenbrock(std::size_t n, double target = 0.1, bool literal_plus_term = false);
Problem make_rastrigin(std::size_t n, double target = 1.0);

// --- wrappers and pattern targets ---

/// XOR mask applied to the genome before the inner evaluation. The optimum
/// value is unchanged; the optimal genome moves to optimum XOR mask.
Problem masked(Problem inner, std::vector<std::uint8_t> mask);

std::vector<std::uint8_t> random_mask(std::size_t n, RandomSource& rng);

/// 81-bit target laid out as a 9x9 row-major pixel grid.
struct PatternTarget {
    std::string name;
    std::vector<std::uint8_t> pixels;  // length 81
};

PatternTarget box_pattern();    // outer border ring set
PatternTarget cross_pattern();  // middle row and middle column set

/// Hamming distance to the target pixels (the minimized quantity).
int pattern_distance(const Genome& g, const PatternTarget& target);

/// Fitness = 81 - pattern_distance; optimum 81.
Problem make_pattern_problem(const PatternTarget& target);

/// The 16 quadrant hybrids of two 9x9 patterns. The grid splits after row/col
/// index 4; mask bit q selects the cross source for quadrant q (row-major
/// quadrant order), so mask 0 reproduces box and mask 15 reproduces cross.
std::vector<PatternTarget> make_combined_patterns(const PatternTarget& box,
                                                  const PatternTarget& cross);

} // namespace daga
