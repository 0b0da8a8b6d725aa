#include "daga/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace daga {

namespace {

void require_binary(const Genome& g, std::size_t n, const char* what) {
    if (g.kind != GenomeKind::Binary || g.bits.size() != n)
        throw GenomeTypeError(std::string(what) + ": expected binary genome of length " +
                              std::to_string(n));
}

Problem make_continuous(std::string name, std::size_t n, double bound, double target,
                        std::function<double(const std::vector<double>&)> raw) {
    Problem p;
    p.name = std::move(name);
    p.kind = GenomeKind::Continuous;
    p.length = n;
    p.lower.assign(n, -bound);
    p.upper.assign(n, bound);
    p.minimizing = true;
    p.target = -target;
    p.clamp_warnings = std::make_shared<std::atomic<long long>>(0);
    p.evaluate = [n, raw, lower = p.lower, upper = p.upper,
                  warnings = p.clamp_warnings](const Genome& g) {
        if (g.kind != GenomeKind::Continuous || g.values.size() != n)
            throw GenomeTypeError("expected continuous genome of length " + std::to_string(n));
        std::vector<double> v = g.values;
        bool warned = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (v[i] < lower[i]) {
                v[i] = lower[i];
                warned = true;
            } else if (v[i] > upper[i]) {
                v[i] = upper[i];
                warned = true;
            }
        }
        if (warned) warnings->fetch_add(1, std::memory_order_relaxed);
        return -raw(v);
    };
    return p;
}

} // namespace

Population init_population(Evaluator& eval, std::size_t capacity, RandomSource& rng) {
    if (capacity < 1) throw InvalidConfigError("population capacity must be >= 1");
    const Problem& p = *eval.problem;
    Population pop;
    pop.capacity = capacity;
    pop.members.reserve(capacity);
    for (std::size_t m = 0; m < capacity; ++m) {
        Genome g;
        if (p.kind == GenomeKind::Binary) {
            g.kind = GenomeKind::Binary;
            g.bits.resize(p.length);
            for (auto& bit : g.bits) bit = rng.bernoulli(0.5) ? 1 : 0;
        } else {
            g.kind = GenomeKind::Continuous;
            g.values.resize(p.length);
            for (std::size_t i = 0; i < p.length; ++i)
                g.values[i] = rng.uniform(p.lower[i], p.upper[i]);
        }
        const double f = eval.evaluate(g);
        pop.members.push_back(Individual{std::move(g), f});
    }
    return pop;
}

Problem make_maxones(std::size_t n) {
    Problem p;
    p.name = "maxones-" + std::to_string(n);
    p.kind = GenomeKind::Binary;
    p.length = n;
    p.optimum = static_cast<double>(n);
    p.evaluate = [n](const Genome& g) {
        require_binary(g, n, "maxones");
        int ones = 0;
        for (auto b : g.bits) ones += b;
        return static_cast<double>(ones);
    };
    return p;
}

Problem make_hiff(std::size_t n) {
    if (n == 0 || (n & (n - 1)) != 0)
        throw InvalidConfigError("hiff length must be a power of two, got " + std::to_string(n));
    Problem p;
    p.name = "hiff-" + std::to_string(n);
    p.kind = GenomeKind::Binary;
    p.length = n;
    p.evaluate = [n](const Genome& g) {
        require_binary(g, n, "hiff");
        // Level 0: every single bit is a homogeneous block. Higher levels merge
        // pairs; a block stays homogeneous only if both halves are and agree.
        long long score = static_cast<long long>(n);
        std::vector<int> value(g.bits.begin(), g.bits.end());  // -1 marks mixed blocks
        long long block = 2;
        while (value.size() > 1) {
            std::vector<int> next(value.size() / 2);
            for (std::size_t i = 0; i < next.size(); ++i) {
                const int a = value[2 * i], b = value[2 * i + 1];
                next[i] = (a >= 0 && a == b) ? a : -1;
                if (next[i] >= 0) score += block;
            }
            value.swap(next);
            block *= 2;
        }
        return static_cast<double>(score);
    };
    // Homogeneous strings attain the maximum: n per level, log2(n)+1 levels.
    {
        Genome ones = Genome::binary(std::vector<std::uint8_t>(n, 1));
        p.optimum = p.evaluate(ones);
    }
    return p;
}

Problem make_royal_road(std::size_t n, std::size_t block) {
    if (block == 0 || n % block != 0)
        throw InvalidConfigError("royal road length must be divisible by the block size");
    Problem p;
    p.name = "royalroad-" + std::to_string(n);
    p.kind = GenomeKind::Binary;
    p.length = n;
    p.optimum = static_cast<double>(n);
    p.evaluate = [n, block](const Genome& g) {
        require_binary(g, n, "royal_road");
        long long score = 0;
        for (std::size_t start = 0; start < n; start += block) {
            bool full = true;
            for (std::size_t i = start; i < start + block; ++i)
                if (!g.bits[i]) {
                    full = false;
                    break;
                }
            if (full) score += static_cast<long long>(block);
        }
        return static_cast<double>(score);
    };
    return p;
}

Problem make_maxsat(CnfFormula cnf, std::optional<double> optimum) {
    Problem p;
    p.name = "maxsat-" + std::to_string(cnf.num_vars) + "-" + std::to_string(cnf.clauses.size());
    p.kind = GenomeKind::Binary;
    p.length = static_cast<std::size_t>(cnf.num_vars);
    p.optimum = optimum;
    const auto n = p.length;
    p.evaluate = [cnf = std::move(cnf), n](const Genome& g) {
        require_binary(g, n, "maxsat");
        int satisfied = 0;
        for (const auto& clause : cnf.clauses) {
            for (int lit : clause.lits) {
                const int var = lit > 0 ? lit : -lit;
                const bool value = g.bits[static_cast<std::size_t>(var - 1)] != 0;
                if (value == (lit > 0)) {
                    ++satisfied;
                    break;
                }
            }
        }
        return static_cast<double>(satisfied);
    };
    return p;
}

Problem make_knapsack(KnapsackInstance inst) {
    const std::size_t n = inst.items();
    const std::size_t m = inst.constraints();
    if (n == 0 || m == 0) throw InvalidConfigError("knapsack instance needs items and constraints");
    for (const auto& row : inst.weights)
        if (row.size() != n) throw InvalidConfigError("knapsack weight row length mismatch");
    if (inst.weights.size() != m) throw InvalidConfigError("knapsack weight row count mismatch");

    // Penalty rate per constraint: above both the best profit density and the
    // largest single profit. Overweight can always be cleared by removing items
    // at a cost of at most max_profit per overweight unit (integer weights), so
    // this rate keeps every infeasible selection strictly below the feasible
    // optimum while still grading near the boundary.
    double max_profit = 0.0;
    for (double p : inst.profits) max_profit = std::max(max_profit, p);
    std::vector<double> penalty_rate(m, 1.0);
    for (std::size_t j = 0; j < m; ++j) {
        double best = max_profit;
        for (std::size_t i = 0; i < n; ++i)
            if (inst.weights[j][i] > 0.0)
                best = std::max(best, inst.profits[i] / inst.weights[j][i]);
        penalty_rate[j] = best + 1.0;
    }

    Problem p;
    p.name = "knapsack-" + std::to_string(n) + "-" + std::to_string(m);
    p.kind = GenomeKind::Binary;
    p.length = n;
    p.optimum = inst.optimum;
    p.evaluate = [inst = std::move(inst), penalty_rate = std::move(penalty_rate),
                  n](const Genome& g) {
        require_binary(g, n, "knapsack");
        double profit = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (g.bits[i]) profit += inst.profits[i];
        double penalty = 0.0;
        for (std::size_t j = 0; j < inst.constraints(); ++j) {
            double load = 0.0;
            const auto& row = inst.weights[j];
            for (std::size_t i = 0; i < n; ++i)
                if (g.bits[i]) load += row[i];
            if (load > inst.capacities[j]) penalty += penalty_rate[j] * (load - inst.capacities[j]);
        }
        return penalty > 0.0 ? std::max(0.0, profit - penalty) : profit;
    };
    return p;
}

Problem make_sphere(std::size_t n, double target) {
    return make_continuous("sphere-" + std::to_string(n), n, 5.12, target,
                           [](const std::vector<double>& v) {
                               double s = 0.0;
                               for (double x : v) s += x * x;
                               return s;
                           });
}

Problem make_rosenbrock(std::size_t n, double target, bool literal_plus_term) {
    const double sign = literal_plus_term ? 1.0 : -1.0;
    return make_continuous("rosenbrock-" + std::to_string(n), n, 2.048, target,
                           [sign](const std::vector<double>& v) {
                               double s = 0.0;
                               for (std::size_t i = 0; i + 1 < v.size(); ++i) {
                                   const double a = v[i + 1] - v[i] * v[i];
                                   const double b = 1.0 + sign * v[i];
                                   s += 100.0 * a * a + b * b;
                               }
                               return s;
                           });
}

Problem make_rastrigin(std::size_t n, double target) {
    return make_continuous("rastrigin-" + std::to_string(n), n, 5.12, target,
                           [](const std::vector<double>& v) {
                               double s = 10.0 * static_cast<double>(v.size());
                               for (double x : v)
                                   s += x * x - 10.0 * std::cos(2.0 * std::numbers::pi * x);
                               return s;
                           });
}

Problem masked(Problem inner, std::vector<std::uint8_t> mask) {
    if (inner.kind != GenomeKind::Binary)
        throw InvalidConfigError("masking applies to binary problems only");
    if (mask.size() != inner.length)
        throw InvalidConfigError("mask length " + std::to_string(mask.size()) +
                                 " does not match genome length " + std::to_string(inner.length));
    Problem p = inner;
    p.name = inner.name + "-masked";
    p.evaluate = [inner_eval = inner.evaluate, mask = std::move(mask)](const Genome& g) {
        Genome unmasked = g;
        for (std::size_t i = 0; i < mask.size(); ++i) unmasked.bits[i] ^= mask[i];
        return inner_eval(unmasked);
    };
    return p;
}

std::vector<std::uint8_t> random_mask(std::size_t n, RandomSource& rng) {
    std::vector<std::uint8_t> mask(n);
    for (auto& bit : mask) bit = rng.bernoulli(0.5) ? 1 : 0;
    return mask;
}

PatternTarget box_pattern() {
    PatternTarget t;
    t.name = "box";
    t.pixels.assign(81, 0);
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c)
            if (r == 0 || r == 8 || c == 0 || c == 8) t.pixels[static_cast<std::size_t>(9 * r + c)] = 1;
    return t;
}

PatternTarget cross_pattern() {
    PatternTarget t;
    t.name = "cross";
    t.pixels.assign(81, 0);
    for (int i = 0; i < 9; ++i) {
        t.pixels[static_cast<std::size_t>(9 * 4 + i)] = 1;
        t.pixels[static_cast<std::size_t>(9 * i + 4)] = 1;
    }
    return t;
}

int pattern_distance(const Genome& g, const PatternTarget& target) {
    require_binary(g, target.pixels.size(), "pattern_distance");
    int d = 0;
    for (std::size_t i = 0; i < target.pixels.size(); ++i) d += g.bits[i] != target.pixels[i];
    return d;
}

Problem make_pattern_problem(const PatternTarget& target) {
    Problem p;
    p.name = "pattern-" + target.name;
    p.kind = GenomeKind::Binary;
    p.length = target.pixels.size();
    p.optimum = static_cast<double>(target.pixels.size());
    p.evaluate = [target](const Genome& g) {
        return static_cast<double>(target.pixels.size() - pattern_distance(g, target));
    };
    return p;
}

std::vector<PatternTarget> make_combined_patterns(const PatternTarget& box,
                                                  const PatternTarget& cross) {
    std::vector<PatternTarget> out;
    out.reserve(16);
    for (int mask = 0; mask < 16; ++mask) {
        PatternTarget t;
        t.name = "hybrid-" + std::to_string(mask);
        if (mask == 0) t.name = box.name;
        if (mask == 15) t.name = cross.name;
        t.pixels.resize(81);
        for (int r = 0; r < 9; ++r) {
            for (int c = 0; c < 9; ++c) {
                const int quadrant = (r >= 5 ? 2 : 0) + (c >= 5 ? 1 : 0);
                const bool use_cross = (mask >> quadrant) & 1;
                const auto idx = static_cast<std::size_t>(9 * r + c);
                t.pixels[idx] = use_cross ? cross.pixels[idx] : box.pixels[idx];
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace daga
