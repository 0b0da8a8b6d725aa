#pragma once

#include <optional>
#include <string>
#include <vector>

#include "daga/problems.hpp"

namespace daga {

/// Parse a DIMACS CNF document. Comment lines ('c') are skipped; the 'p cnf V C'
/// header is enforced; clauses are zero-terminated and must have exactly three
/// literals for this suite. Errors carry the offending line number.
CnfFormula parse_dimacs(const std::string& text);

/// Knapsack file: header "items constraints optimum" (0 or '?' when unknown,
/// OR-Library mknap ordering), then the profits, the constraint x item weight
/// rows, and the capacities, whitespace separated.
KnapsackInstance parse_knapsack(const std::string& text);
std::string write_knapsack(const KnapsackInstance& inst);

/// Pattern file: repeated "pattern <name>" headers, each followed by nine rows
/// of nine '0'/'1' cells.
std::vector<PatternTarget> parse_patterns(const std::string& text);
std::string write_patterns(const std::vector<PatternTarget>& patterns);

/// One trial per row, stable column order, header always present.
struct TrialRow {
    std::string problem;
    std::string algorithm;
    std::uint64_t seed = 0;
    double best = 0.0;  // problem-domain value
    std::optional<long long> evals_to_success;
    bool success = false;
};

std::string write_csv(const std::vector<TrialRow>& rows);
std::vector<TrialRow> parse_csv(const std::string& text);

/// Shortest round-trip decimal rendering (std::to_chars).
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace daga
