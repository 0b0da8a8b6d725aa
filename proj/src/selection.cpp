#include "daga/selection.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace daga {

namespace {

struct GenomeRef {
    const Genome* g;
};

struct GenomeRefHash {
    std::size_t operator()(const GenomeRef& r) const {
        return static_cast<std::size_t>(genome_hash(*r.g));
    }
};

struct GenomeRefEq {
    bool operator()(const GenomeRef& a, const GenomeRef& b) const { return *a.g == *b.g; }
};

} // namespace

std::vector<std::size_t> truncation_select_unique_indices(const Population& pop,
                                                          const TruncationSpec& spec) {
    if (spec.percent <= 0.0 || spec.percent > 100.0)
        throw InvalidConfigError("truncation percent must lie in (0, 100]");

    std::vector<std::size_t> unique;
    unique.reserve(pop.members.size());
    std::unordered_set<GenomeRef, GenomeRefHash, GenomeRefEq> seen;
    seen.reserve(pop.members.size() * 2);
    for (std::size_t i = 0; i < pop.members.size(); ++i)
        if (seen.insert(GenomeRef{&pop.members[i].genome}).second) unique.push_back(i);

    std::stable_sort(unique.begin(), unique.end(), [&pop](std::size_t a, std::size_t b) {
        return pop.members[a].fitness > pop.members[b].fitness;
    });

    auto want = static_cast<std::size_t>(
        std::floor(spec.percent / 100.0 * static_cast<double>(pop.capacity)));
    want = std::max<std::size_t>(1, want);
    want = std::min(want, unique.size());
    unique.resize(want);
    return unique;
}

std::vector<Genome> truncation_select_unique(const Population& pop, const TruncationSpec& spec) {
    std::vector<Genome> out;
    const auto indices = truncation_select_unique_indices(pop, spec);
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(pop.members[i].genome);
    return out;
}

const Individual& tournament_select(const Population& pop, int k, RandomSource& rng) {
    if (k < 1) throw InvalidConfigError("tournament size must be >= 1");
    const auto n = pop.members.size();
    const Individual* best = &pop.members[rng.uniform_below(n)];
    for (int i = 1; i < k; ++i) {
        const Individual& challenger = pop.members[rng.uniform_below(n)];
        if (challenger.fitness > best->fitness) best = &challenger;
    }
    return *best;
}

bool rtr_replace(Population& pop, const Individual& candidate, const RtrSpec& spec,
                 RandomSource& rng) {
    std::vector<std::size_t> workspace;
    return rtr_replace(pop, candidate, spec, rng, workspace);
}

bool rtr_replace(Population& pop, const Individual& candidate, const RtrSpec& spec,
                 RandomSource& rng, std::vector<std::size_t>& workspace) {
    const auto n = pop.members.size();
    if (spec.window < 1 || spec.window > n)
        throw InvalidConfigError("RTR window must lie in [1, population size]");

    if (workspace.size() != n) {
        workspace.resize(n);
        for (std::size_t i = 0; i < n; ++i) workspace[i] = i;
    }

    const bool binary = candidate.genome.kind == GenomeKind::Binary;
    std::size_t closest = n;  // population index of the nearest sampled member
    double closest_dist = 0.0;
    for (std::size_t i = 0; i < spec.window; ++i) {
        const std::size_t j = i + rng.uniform_below(n - i);
        std::swap(workspace[i], workspace[j]);
        const std::size_t member = workspace[i];
        const double dist =
            binary ? static_cast<double>(hamming_distance(candidate.genome, pop.members[member].genome))
                   : euclidean_distance(candidate.genome, pop.members[member].genome);
        if (closest == n || dist < closest_dist || (dist == closest_dist && member < closest)) {
            closest = member;
            closest_dist = dist;
        }
    }

    if (candidate.fitness > pop.members[closest].fitness) {
        pop.members[closest] = candidate;
        return true;
    }
    return false;
}

} // namespace daga
