#include "daga/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "daga/ingestion.hpp"

namespace daga {

namespace {

constexpr std::uint64_t kProbeInputSeed = 0x50b3c0de;
constexpr std::uint64_t kProbeSampleStream = 0x5a3117;
constexpr std::uint64_t kStageStreamBase = 0x57a6e000;

std::vector<std::vector<double>> random_binary_probes(std::size_t count, std::size_t bits) {
    RandomSource rng(kProbeInputSeed);
    std::vector<std::vector<double>> probes(count);
    for (auto& p : probes) {
        p.resize(bits);
        for (auto& v : p) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    return probes;
}

} // namespace

Genome genome_from_index(std::size_t index, std::size_t n) {
    Genome g;
    g.kind = GenomeKind::Binary;
    g.bits.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.bits[i] = (index >> (n - 1 - i)) & 1 ? 1 : 0;
    return g;
}

std::size_t genome_index(const Genome& g) {
    std::size_t index = 0;
    for (auto b : g.bits) index = (index << 1) | (b ? 1u : 0u);
    return index;
}

TransitionMatrix build_transition_matrix(const DenoisingAutoencoder& dae, std::size_t n) {
    if (n > 12)
        throw InvalidConfigError("transition matrix limited to n <= 12 (table grows as 4^n)");
    if (dae.visible_size() != n)
        throw InvalidConfigError("transition matrix: visible size does not match n");

    const std::size_t count = std::size_t{1} << n;
    TransitionMatrix m;
    m.n = n;
    m.entries.resize(count * count);
    m.marginal.assign(count, 0.0);

    std::vector<double> input(n);
    for (std::size_t from = 0; from < count; ++from) {
        for (std::size_t i = 0; i < n; ++i) input[i] = (from >> (n - 1 - i)) & 1 ? 1.0 : 0.0;
        const auto z = dae.reconstruct(input);
        double* row = &m.entries[from * count];
        row[0] = 1.0;
        std::size_t filled = 1;
        // Double the filled prefix once per bit: branch on z_i vs 1-z_i.
        for (std::size_t i = 0; i < n; ++i) {
            const double z_i = z[i];
            for (std::size_t t = 0; t < filled; ++t) {
                const double base = row[t];
                row[t] = base * (1.0 - z_i);
                row[t + filled] = base * z_i;
            }
            filled <<= 1;
        }
        // The doubling trick indexes bit i at position 2^i; transition indices
        // want bit i of the genome string as the high bit, so remap.
        // Rebuild in-place via a scratch row to keep indices straight.
        static thread_local std::vector<double> scratch;
        scratch.assign(row, row + count);
        for (std::size_t to = 0; to < count; ++to) {
            std::size_t key = 0;
            for (std::size_t i = 0; i < n; ++i)
                if ((to >> (n - 1 - i)) & 1) key |= std::size_t{1} << i;
            row[to] = scratch[key];
        }
        for (std::size_t to = 0; to < count; ++to) m.marginal[to] += row[to];
    }
    const double inv = 1.0 / static_cast<double>(count);
    for (auto& v : m.marginal) v *= inv;
    return m;
}

std::vector<std::size_t> top_marginals(const TransitionMatrix& m, std::size_t k) {
    std::vector<std::size_t> order(m.marginal.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&m](std::size_t a, std::size_t b) {
        return m.marginal[a] > m.marginal[b];
    });
    order.resize(std::min(k, order.size()));
    return order;
}

CorruptionSweepResult corruption_sweep(const std::vector<double>& rates,
                                       const std::vector<std::uint64_t>& seeds,
                                       const SweepProtocol& protocol) {
    CorruptionSweepResult result;
    result.protocol = protocol;

    const auto probes = random_binary_probes(protocol.probes, protocol.genome_bits);
    Problem maxones = make_maxones(protocol.genome_bits);
    maxones.optimum.reset();  // always run the full generation budget

    const auto sample_distances = [&](const DenoisingAutoencoder& dae, std::uint64_t seed,
                                      SweepCell& cell) {
        RandomSource sample_rng = RandomSource(seed).split(kProbeSampleStream);
        cell.histogram.assign(protocol.genome_bits + 1, 0);
        double total = 0.0;
        for (const auto& probe : probes) {
            const auto z = dae.reconstruct(probe);
            const Genome child = sample_offspring(z, SamplerConfig{SamplerMode::Bernoulli, 0.0},
                                                  sample_rng);
            std::size_t distance = 0;  // Hamming distance to the all-ones optimum
            for (auto b : child.bits) distance += b ? 0 : 1;
            ++cell.histogram[distance];
            total += static_cast<double>(distance);
        }
        cell.mean_distance = total / static_cast<double>(probes.size());
    };

    DagaConfig cfg;
    cfg.population = protocol.population;
    cfg.trunc_percent = protocol.trunc_percent;
    cfg.epochs = protocol.epochs;
    cfg.learning_rate = protocol.learning_rate;
    cfg.hidden_size = protocol.hidden_size;
    cfg.minibatch_size = protocol.minibatch_size;
    cfg.max_generations = protocol.generations;
    cfg.max_evaluations =
        static_cast<long long>(protocol.population) * (protocol.generations + 1);
    cfg.sampler = SamplerConfig{SamplerMode::Bernoulli, 0.0};

    for (double rate : rates) {
        for (std::uint64_t seed : seeds) {
            SweepCell cell;
            cell.rate = rate;
            cell.seed = seed;
            DagaConfig run_cfg = cfg;
            run_cfg.corruption_rate = rate;
            RandomSource rng(seed);
            DenoisingAutoencoder dae = make_run_autoencoder(maxones, run_cfg, rng);
            daga_run(maxones, run_cfg, rng, dae);
            sample_distances(dae, seed, cell);
            result.cells.push_back(std::move(cell));
        }
    }
    for (std::uint64_t seed : seeds) {
        SweepCell cell;
        cell.rate = -1.0;  // marks the untrained baseline
        cell.seed = seed;
        RandomSource rng(seed);
        const DenoisingAutoencoder dae = make_run_autoencoder(maxones, cfg, rng);
        sample_distances(dae, seed, cell);
        result.baseline.push_back(std::move(cell));
    }
    return result;
}

std::vector<std::pair<double, double>> sweep_rate_means(const CorruptionSweepResult& result) {
    std::vector<std::pair<double, double>> means;
    for (const auto& cell : result.cells) {
        if (means.empty() || means.back().first != cell.rate) means.emplace_back(cell.rate, 0.0);
        means.back().second += cell.mean_distance;
    }
    const double per_rate = means.empty()
                                ? 1.0
                                : static_cast<double>(result.cells.size()) /
                                      static_cast<double>(means.size());
    for (auto& [rate, mean] : means) mean /= per_rate;
    return means;
}

RandomSource transfer_stage_rng(std::uint64_t trial_seed, int stage) {
    return RandomSource(trial_seed).split(kStageStreamBase + static_cast<std::uint64_t>(stage));
}

SpeedupRecord transfer_experiment(const std::array<PatternTarget, 3>& sequence,
                                  const DagaConfig& cfg, int trials, std::uint64_t base_seed,
                                  const TransferDumpSink& sink) {
    if (trials < 1) throw InvalidConfigError("transfer experiment needs at least one trial");
    SpeedupRecord record;
    record.third_pattern = sequence[2].name;
    record.trials = trials;

    const auto probes = random_binary_probes(18, sequence[0].pixels.size());
    const auto dump = [&](const DenoisingAutoencoder& dae, const std::string& stage,
                          std::uint64_t seed) {
        if (!sink) return;
        std::vector<std::vector<double>> outputs;
        outputs.reserve(probes.size());
        for (const auto& probe : probes) outputs.push_back(dae.reconstruct(probe));
        sink(stage, seed, outputs);
    };

    const std::array<Problem, 3> problems = {make_pattern_problem(sequence[0]),
                                             make_pattern_problem(sequence[1]),
                                             make_pattern_problem(sequence[2])};

    for (int t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = base_seed + static_cast<std::uint64_t>(t);
        std::array<RandomSource, 3> stage_rng = {transfer_stage_rng(trial_seed, 0),
                                                 transfer_stage_rng(trial_seed, 1),
                                                 transfer_stage_rng(trial_seed, 2)};

        // Pretrained chain: weights persist across the three instances.
        DenoisingAutoencoder dae = make_run_autoencoder(problems[0], cfg, stage_rng[0]);
        dump(dae, "untrained", trial_seed);
        daga_run(problems[0], cfg, stage_rng[0], dae);
        dump(dae, "stage1-" + sequence[0].name, trial_seed);
        daga_run(problems[1], cfg, stage_rng[1], dae);
        dump(dae, "stage2-" + sequence[1].name, trial_seed);
        RandomSource pretrained_rng = stage_rng[2];
        const TrialResult pretrained = daga_run(problems[2], cfg, pretrained_rng, dae);
        dump(dae, "stage3-" + sequence[2].name, trial_seed);

        // Fresh run on the third pattern with the identical stage seed; only
        // the starting weights differ.
        RandomSource fresh_rng = stage_rng[2];
        const TrialResult fresh = daga_run(problems[2], cfg, fresh_rng);

        record.pretrained_iterations.push_back(pretrained.generations);
        record.fresh_iterations.push_back(fresh.generations);
        record.pretrained_evaluations.push_back(pretrained.evaluations);
        record.fresh_evaluations.push_back(fresh.evaluations);
    }

    const auto mean = [](const std::vector<long long>& v) {
        double total = 0.0;
        for (auto x : v) total += static_cast<double>(x);
        return total / static_cast<double>(v.size());
    };
    record.mean_iterations_fresh = mean(record.fresh_iterations);
    record.mean_iterations_pretrained = mean(record.pretrained_iterations);
    record.speedup = record.mean_iterations_fresh - record.mean_iterations_pretrained;
    return record;
}

namespace {

double normal_two_sided(double deviation, double sigma) {
    const double z = std::max(0.0, deviation - 0.5) / sigma;  // continuity correction
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

/// Recursive subset enumeration over pooled ranks; counts rank sums whose
/// deviation from the null mean reaches the observed one.
void count_subsets(const std::vector<double>& ranks, std::size_t next, std::size_t remaining,
                   double rank_sum, double threshold, double offset, long long& hits,
                   long long& total) {
    if (remaining == 0) {
        ++total;
        if (std::fabs(rank_sum - offset) >= threshold) ++hits;
        return;
    }
    if (ranks.size() - next < remaining) return;
    count_subsets(ranks, next + 1, remaining - 1, rank_sum + ranks[next], threshold, offset, hits,
                  total);
    count_subsets(ranks, next + 1, remaining, rank_sum, threshold, offset, hits, total);
}

} // namespace

double rank_sum_test(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n < 3 || m < 3) throw InvalidConfigError("rank_sum_test needs at least 3 values per side");
    const std::size_t total_n = n + m;

    struct Entry {
        double value;
        bool in_a;
    };
    std::vector<Entry> pooled;
    pooled.reserve(total_n);
    for (double v : a) pooled.push_back({v, true});
    for (double v : b) pooled.push_back({v, false});
    std::stable_sort(pooled.begin(), pooled.end(),
                     [](const Entry& x, const Entry& y) { return x.value < y.value; });

    // Midranks; collect tie group sizes for the variance correction.
    std::vector<double> ranks(total_n);
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < total_n) {
        std::size_t j = i;
        while (j + 1 < total_n && pooled[j + 1].value == pooled[i].value) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) ranks[k] = midrank;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }

    double rank_sum_a = 0.0;
    for (std::size_t k = 0; k < total_n; ++k)
        if (pooled[k].in_a) rank_sum_a += ranks[k];

    const double null_mean = static_cast<double>(n) * static_cast<double>(total_n + 1) / 2.0;
    const double deviation = std::fabs(rank_sum_a - null_mean);

    const bool exact = (n <= 10 && m <= 10) || total_n <= 12;
    if (exact) {
        long long hits = 0;
        long long count = 0;
        count_subsets(ranks, 0, n, 0.0, deviation, null_mean, hits, count);
        return static_cast<double>(hits) / static_cast<double>(count);
    }

    const double nn = static_cast<double>(n), mm = static_cast<double>(m),
                 tt = static_cast<double>(total_n);
    const double variance =
        nn * mm / 12.0 * ((tt + 1.0) - tie_term / (tt * (tt - 1.0)));
    if (variance <= 0.0) return 1.0;  // every pooled value identical
    return normal_two_sided(deviation, std::sqrt(variance));
}

std::string transition_matrix_tsv(const TransitionMatrix& m) {
    const std::size_t count = std::size_t{1} << m.n;
    std::string out = "from\\to";
    for (std::size_t to = 0; to < count; ++to) out += "\t" + std::to_string(to);
    out += "\n";
    for (std::size_t from = 0; from < count; ++from) {
        out += std::to_string(from);
        for (std::size_t to = 0; to < count; ++to) out += "\t" + format_double(m.at(from, to));
        out += "\n";
    }
    return out;
}

std::string marginals_tsv(const TransitionMatrix& m) {
    std::string out = "genome\tmarginal_probability\n";
    for (std::size_t g = 0; g < m.marginal.size(); ++g)
        out += std::to_string(g) + "\t" + format_double(m.marginal[g]) + "\n";
    return out;
}

std::string sweep_tsv(const CorruptionSweepResult& result) {
    std::string out = "rate\tseed\tmean_distance";
    for (std::size_t d = 0; d < result.protocol.genome_bits + 1; ++d)
        out += "\td" + std::to_string(d);
    out += "\n";
    const auto emit = [&out](const SweepCell& cell, const std::string& rate_label) {
        out += rate_label + "\t" + std::to_string(cell.seed) + "\t" +
               format_double(cell.mean_distance);
        for (auto h : cell.histogram) out += "\t" + std::to_string(h);
        out += "\n";
    };
    for (const auto& cell : result.cells) emit(cell, format_double(cell.rate));
    for (const auto& cell : result.baseline) emit(cell, "untrained");
    return out;
}

std::string speedup_tsv(const SpeedupRecord& record) {
    std::string out =
        "third_pattern\ttrials\tmean_iterations_fresh\tmean_iterations_pretrained\tspeedup\n";
    out += record.third_pattern + "\t" + std::to_string(record.trials) + "\t" +
           format_double(record.mean_iterations_fresh) + "\t" +
           format_double(record.mean_iterations_pretrained) + "\t" +
           format_double(record.speedup) + "\n";
    out += "trial\titerations_fresh\titerations_pretrained\tevals_fresh\tevals_pretrained\n";
    for (std::size_t t = 0; t < record.fresh_iterations.size(); ++t)
        out += std::to_string(t) + "\t" + std::to_string(record.fresh_iterations[t]) + "\t" +
               std::to_string(record.pretrained_iterations[t]) + "\t" +
               std::to_string(record.fresh_evaluations[t]) + "\t" +
               std::to_string(record.pretrained_evaluations[t]) + "\n";
    return out;
}

std::string decoder_dump_tsv(const std::vector<std::vector<double>>& outputs) {
    std::string out = "input\tcomponent\tvalue\n";
    for (std::size_t i = 0; i < outputs.size(); ++i)
        for (std::size_t c = 0; c < outputs[i].size(); ++c)
            out += std::to_string(i) + "\t" + std::to_string(c) + "\t" +
                   format_double(outputs[i][c]) + "\n";
    return out;
}

} // namespace daga
