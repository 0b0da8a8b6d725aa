// Regenerates the bundled benchmark data files under data/.
//
// The knapsack instances are built so the optimum is known by construction:
// for multipliers l_j > 0, give every "solution" item profit equal to
// sum_j l_j * w_ij, every other item strictly less, and set each capacity to
// the exact weight of the solution set. For any feasible selection x,
// profit(x) <= sum_j l_j * load_j(x) <= sum_j l_j * c_j = profit(S), with
// equality only for S itself. The MAXSAT instance plants a hidden assignment
// and only emits clauses it satisfies, so the optimum is the clause count.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "daga/ingestion.hpp"
#include "daga/problems.hpp"
#include "daga/rng.hpp"

using namespace daga;

namespace {

long long irange(RandomSource& rng, long long lo, long long hi) {
    return lo + static_cast<long long>(rng.uniform_below(static_cast<std::size_t>(hi - lo + 1)));
}

/// Nudge solution-item weights so sum_i (2 w1_i + 3 w2_i) hits `target` exactly.
void close_weighted_total(std::vector<long long>& w1, std::vector<long long>& w2,
                          long long target) {
    long long total = 0;
    for (std::size_t i = 0; i < w1.size(); ++i) total += 2 * w1[i] + 3 * w2[i];
    long long diff = target - total;

    const long long per_item = diff / (3 * static_cast<long long>(w2.size()));
    for (auto& w : w2) w += per_item;
    diff -= per_item * 3 * static_cast<long long>(w2.size());

    std::size_t k = 0;
    while (diff >= 3) {
        w2[k++ % w2.size()] += 1;
        diff -= 3;
    }
    while (diff <= -3) {
        w2[k++ % w2.size()] -= 1;
        diff += 3;
    }
    if (diff == 2) w1[0] += 1;
    if (diff == -2) w1[0] -= 1;
    if (diff == 1) {
        w2[0] += 1;
        w1[0] -= 1;
    }
    if (diff == -1) {
        w2[0] -= 1;
        w1[0] += 1;
    }
}

KnapsackInstance make_two_constraint_instance() {
    // 105 items, 2 constraints, optimum exactly 624319.
    RandomSource rng(0xbee105);
    const std::size_t items = 105;
    const std::size_t solution_size = 60;
    const long long target = 624319;

    std::vector<long long> sw1(solution_size), sw2(solution_size);
    for (auto& w : sw1) w = irange(rng, 1500, 2700);
    for (auto& w : sw2) w = irange(rng, 1500, 2700);
    close_weighted_total(sw1, sw2, target);

    struct Item {
        long long p, w1, w2;
        bool in_solution;
    };
    std::vector<Item> all;
    for (std::size_t i = 0; i < solution_size; ++i)
        all.push_back({2 * sw1[i] + 3 * sw2[i], sw1[i], sw2[i], true});
    for (std::size_t i = solution_size; i < items; ++i) {
        const long long w1 = irange(rng, 1500, 2700);
        const long long w2 = irange(rng, 1500, 2700);
        const long long deficit = irange(rng, 500, 2000);
        all.push_back({std::max<long long>(1, 2 * w1 + 3 * w2 - deficit), w1, w2, false});
    }
    for (std::size_t i = all.size(); i > 1; --i)
        std::swap(all[i - 1], all[rng.uniform_below(i)]);

    KnapsackInstance inst;
    inst.weights.assign(2, {});
    long long c1 = 0, c2 = 0, total = 0;
    for (const auto& item : all) {
        inst.profits.push_back(static_cast<double>(item.p));
        inst.weights[0].push_back(static_cast<double>(item.w1));
        inst.weights[1].push_back(static_cast<double>(item.w2));
        if (item.in_solution) {
            c1 += item.w1;
            c2 += item.w2;
            total += item.p;
        }
    }
    inst.capacities = {static_cast<double>(c1), static_cast<double>(c2)};
    inst.optimum = static_cast<double>(total);
    if (total != target || 2 * c1 + 3 * c2 != target) {
        std::fprintf(stderr, "two-constraint construction failed: %lld\n", total);
        std::exit(1);
    }
    return inst;
}

KnapsackInstance make_single_constraint_instance() {
    // 500 items, 1 constraint, optimum exactly 10104 (profit == weight for
    // solution items, so any feasible value is bounded by the capacity).
    RandomSource rng(0xbee500);
    const std::size_t items = 500;
    const std::size_t solution_size = 250;
    const long long target = 10104;

    std::vector<long long> sw(solution_size);
    for (auto& w : sw) w = irange(rng, 25, 55);
    long long total = 0;
    for (auto w : sw) total += w;
    long long diff = target - total;
    std::size_t k = 0;
    while (diff > 0) {
        sw[k++ % sw.size()] += 1;
        --diff;
    }
    while (diff < 0) {
        sw[k++ % sw.size()] -= 1;
        ++diff;
    }

    struct Item {
        long long p, w;
        bool in_solution;
    };
    std::vector<Item> all;
    for (auto w : sw) all.push_back({w, w, true});
    for (std::size_t i = solution_size; i < items; ++i) {
        const long long w = irange(rng, 25, 55);
        const long long deficit = irange(rng, 3, 12);
        all.push_back({std::max<long long>(1, w - deficit), w, false});
    }
    for (std::size_t i = all.size(); i > 1; --i)
        std::swap(all[i - 1], all[rng.uniform_below(i)]);

    KnapsackInstance inst;
    inst.weights.assign(1, {});
    long long capacity = 0, value = 0;
    for (const auto& item : all) {
        inst.profits.push_back(static_cast<double>(item.p));
        inst.weights[0].push_back(static_cast<double>(item.w));
        if (item.in_solution) {
            capacity += item.w;
            value += item.p;
        }
    }
    inst.capacities = {static_cast<double>(capacity)};
    inst.optimum = static_cast<double>(value);
    if (value != target || capacity != target) {
        std::fprintf(stderr, "single-constraint construction failed: %lld\n", value);
        std::exit(1);
    }
    return inst;
}

std::string make_planted_cnf() {
    // 100 variables, 430 clauses (clause/variable ratio 4.3), every clause
    // satisfied by a hidden planted assignment.
    RandomSource rng(0x3c4f);
    const int num_vars = 100;
    const int num_clauses = 430;

    std::vector<bool> planted(num_vars);
    for (auto&& b : planted) b = rng.bernoulli(0.5);

    std::set<std::array<int, 3>> seen;
    std::vector<std::array<int, 3>> clauses;
    while (static_cast<int>(clauses.size()) < num_clauses) {
        int v1 = static_cast<int>(rng.uniform_below(num_vars)) + 1;
        int v2 = static_cast<int>(rng.uniform_below(num_vars)) + 1;
        int v3 = static_cast<int>(rng.uniform_below(num_vars)) + 1;
        if (v1 == v2 || v1 == v3 || v2 == v3) continue;
        std::array<int, 3> clause = {v1, v2, v3};
        bool satisfied = false;
        for (auto& lit : clause) {
            const bool positive = rng.bernoulli(0.5);
            if (!positive) lit = -lit;
            const bool value = planted[static_cast<std::size_t>(std::abs(lit)) - 1];
            if (value == (lit > 0)) satisfied = true;
        }
        if (!satisfied) continue;
        auto key = clause;
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second) continue;
        clauses.push_back(clause);
    }

    std::string out;
    out += "c 3-CNF instance, 100 variables, 430 clauses (ratio 4.3)\n";
    out += "c satisfiable by construction; the maximum is the clause count\n";
    out += "c witness ";
    for (bool b : planted) out += b ? '1' : '0';
    out += "\n";
    out += "p cnf 100 430\n";
    for (const auto& c : clauses)
        out += std::to_string(c[0]) + " " + std::to_string(c[1]) + " " + std::to_string(c[2]) +
               " 0\n";
    return out;
}

} // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(dir);

    write_file(dir + "/knapsack_105x2.txt", write_knapsack(make_two_constraint_instance()));
    write_file(dir + "/knapsack_500x1.txt", write_knapsack(make_single_constraint_instance()));
    write_file(dir + "/maxsat_100_430.cnf", make_planted_cnf());
    write_file(dir + "/patterns.txt", write_patterns({box_pattern(), cross_pattern()}));
    std::printf("wrote 4 data files under %s/\n", dir.c_str());
    return 0;
}
