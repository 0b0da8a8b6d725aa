#pragma once

#include <vector>

#include "daga/genome.hpp"
#include "daga/rng.hpp"

namespace daga {

/// Keep the fittest unique x percent as the training set.
struct TruncationSpec {
    double percent = 10.0;  // in (0, 100]
};

/// Restricted tournament replacement window size.
struct RtrSpec {
    std::size_t window = 1;
};

/// Deduplicate by exact genome equality, sort by fitness descending (stable,
/// first-seen order breaks ties) and take the top floor(percent/100 * capacity)
/// genomes, never fewer than one, fewer when uniques run out.
std::vector<Genome> truncation_select_unique(const Population& pop, const TruncationSpec& spec);

/// Same selection, returned as member indices into pop.members.
std::vector<std::size_t> truncation_select_unique_indices(const Population& pop,
                                                          const TruncationSpec& spec);

/// Draw k members uniformly with replacement; return the fittest (first drawn
/// wins ties).
const Individual& tournament_select(const Population& pop, int k, RandomSource& rng);

/// Draw `window` members without replacement, find the one closest to the
/// candidate (Hamming for binary, Euclidean for continuous; lowest population
/// index wins distance ties) and overwrite it if the candidate is strictly
/// fitter. Returns whether a replacement happened.
bool rtr_replace(Population& pop, const Individual& candidate, const RtrSpec& spec,
                 RandomSource& rng);

/// rtr_replace with a caller-owned index workspace (resized as needed); avoids
/// per-call allocation in engine loops.
bool rtr_replace(Population& pop, const Individual& candidate, const RtrSpec& spec,
                 RandomSource& rng, std::vector<std::size_t>& workspace);

} // namespace daga
