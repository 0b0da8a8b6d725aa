#include "daga/engines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace daga {

namespace {

constexpr std::uint64_t kWeightStream = 0xda9a0001ULL;

void fail_config(const std::vector<std::string>& problems) {
    if (problems.empty()) return;
    std::string msg = "invalid engine config:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw InvalidConfigError(msg);
}

/// Best-so-far bookkeeping shared by the three engines.
class RunTracker {
  public:
    RunTracker(const Problem& problem, std::optional<double> stop_fitness)
        : stop_fitness_(stop_fitness) {
        if (problem.optimum)
            success_at_ = problem.optimum;
        else if (problem.target)
            success_at_ = problem.target;
    }

    void observe(const Individual& ind, long long eval_index) {
        if (!has_best_ || ind.fitness > best_.fitness) {
            best_ = ind;
            has_best_ = true;
            trace_.emplace_back(eval_index, ind.fitness);
            if (success_at_ && !evals_to_optimum_ && best_.fitness >= *success_at_)
                evals_to_optimum_ = eval_index;
        }
    }

    bool done() const {
        if (evals_to_optimum_) return true;
        return stop_fitness_ && has_best_ && best_.fitness >= *stop_fitness_;
    }

    TrialResult result(std::uint64_t seed, long long generations, long long evaluations) const {
        TrialResult r;
        r.best = best_;
        r.best_fitness_trace = trace_;
        r.evals_to_optimum = evals_to_optimum_;
        r.success = evals_to_optimum_.has_value();
        r.seed = seed;
        r.generations = generations;
        r.evaluations = evaluations;
        return r;
    }

  private:
    std::optional<double> success_at_;
    std::optional<double> stop_fitness_;
    Individual best_;
    bool has_best_ = false;
    std::vector<std::pair<long long, double>> trace_;
    std::optional<long long> evals_to_optimum_;
};

void observe_population(RunTracker& tracker, const Population& pop, long long first_eval_index) {
    for (std::size_t i = 0; i < pop.members.size(); ++i)
        tracker.observe(pop.members[i], first_eval_index + static_cast<long long>(i));
}

std::vector<double> to_model_space(const Genome& g, const DomainScaler* scaler) {
    if (g.kind == GenomeKind::Binary) return genome_to_unit_vector(g);
    return scaler->scale(g.values);
}

void validate_daga(const Problem& problem, const DagaConfig& cfg) {
    std::vector<std::string> errs;
    if (cfg.population < 1) errs.push_back("population must be >= 1");
    if (cfg.trunc_percent <= 0.0 || cfg.trunc_percent > 100.0)
        errs.push_back("trunc_percent must lie in (0, 100]");
    if (cfg.epochs < 0) errs.push_back("epochs must be >= 0");
    if (cfg.learning_rate <= 0.0) errs.push_back("learning_rate must be > 0");
    if (cfg.corruption_rate < 0.0 || cfg.corruption_rate > 1.0)
        errs.push_back("corruption rate must lie in [0, 1]");
    if (cfg.hidden_size < 1) errs.push_back("hidden_size must be >= 1");
    if (cfg.tournament_k < 1) errs.push_back("tournament_k must be >= 1");
    if (cfg.max_evaluations < 1) errs.push_back("max_evaluations must be >= 1");
    if (cfg.rtr && (cfg.rtr->window < 1 || cfg.rtr->window > cfg.population))
        errs.push_back("rtr window must lie in [1, population]");
    if (problem.kind == GenomeKind::Binary && cfg.sampler.mode != SamplerMode::Bernoulli)
        errs.push_back("binary problems need the Bernoulli sampler");
    if (problem.kind == GenomeKind::Continuous && cfg.sampler.mode != SamplerMode::Gaussian)
        errs.push_back("continuous problems need the Gaussian sampler");
    if (cfg.sampler.sigma_squared < 0.0) errs.push_back("sampler sigma_squared must be >= 0");
    fail_config(errs);
}

} // namespace

DenoisingAutoencoder make_run_autoencoder(const Problem& problem, const DagaConfig& cfg,
                                          const RandomSource& rng) {
    RandomSource wrng = rng.split(kWeightStream);
    return DenoisingAutoencoder(problem.length, cfg.hidden_size, wrng);
}

TrialResult daga_run(const Problem& problem, const DagaConfig& cfg, RandomSource& rng) {
    DenoisingAutoencoder dae = make_run_autoencoder(problem, cfg, rng);
    return daga_run(problem, cfg, rng, dae);
}

TrialResult daga_run(const Problem& problem, const DagaConfig& cfg, RandomSource& rng,
                     DenoisingAutoencoder& dae) {
    validate_daga(problem, cfg);
    if (dae.visible_size() != problem.length)
        throw InvalidConfigError("autoencoder visible size does not match genome length");

    RandomSource wrng = rng.split(kWeightStream);
    Evaluator eval{&problem};
    RunTracker tracker(problem, cfg.stop_fitness);

    Population pop = init_population(eval, cfg.population, rng);
    observe_population(tracker, pop, 1);

    std::optional<DomainScaler> scaler;
    if (problem.kind == GenomeKind::Continuous) scaler.emplace(problem.lower, problem.upper);

    TrainConfig train_cfg;
    train_cfg.epochs = cfg.epochs;
    train_cfg.learning_rate = cfg.learning_rate;
    train_cfg.minibatch_size = cfg.minibatch_size;
    train_cfg.corruption.rate = cfg.corruption_rate;
    train_cfg.corruption.kind = problem.kind == GenomeKind::Binary
                                    ? CorruptionKind::BitFlip
                                    : CorruptionKind::GaussianJitter;
    train_cfg.loss = problem.kind == GenomeKind::Binary ? LossKind::CrossEntropy
                                                        : LossKind::SquaredError;

    std::vector<std::size_t> rtr_workspace;
    std::vector<Individual> offspring;
    std::vector<std::vector<double>> training;

    long long generation = 0;
    while (!tracker.done() && eval.count < cfg.max_evaluations &&
           (cfg.max_generations == 0 || generation < cfg.max_generations)) {
        if (cfg.reinit_weights)
            dae = DenoisingAutoencoder(problem.length, cfg.hidden_size, wrng);

        const auto elites = truncation_select_unique_indices(pop, TruncationSpec{cfg.trunc_percent});
        training.clear();
        training.reserve(elites.size());
        for (auto e : elites)
            training.push_back(to_model_space(pop.members[e].genome, scaler ? &*scaler : nullptr));

        if (cfg.on_before_train) cfg.on_before_train(generation, dae);
        const double loss = dae.train(training, train_cfg, rng);

        offspring.clear();
        bool partial = false;
        for (std::size_t i = 0; i < cfg.population; ++i) {
            if (eval.count >= cfg.max_evaluations) {
                partial = true;
                break;
            }
            const Individual& parent = tournament_select(pop, cfg.tournament_k, rng);
            const auto z = dae.reconstruct(to_model_space(parent.genome, scaler ? &*scaler : nullptr));
            Genome child = sample_offspring(z, cfg.sampler, rng, scaler ? &*scaler : nullptr);
            const double fitness = eval.evaluate(child);
            Individual ind{std::move(child), fitness};
            tracker.observe(ind, eval.count);
            if (cfg.rtr)
                rtr_replace(pop, ind, *cfg.rtr, rng, rtr_workspace);
            else
                offspring.push_back(std::move(ind));
            if (tracker.done()) {
                partial = true;
                break;
            }
        }

        if (!cfg.rtr && !partial) {
            // Generational replacement: elites survive unchanged, the best
            // offspring fill the remaining slots.
            std::stable_sort(offspring.begin(), offspring.end(),
                             [](const Individual& a, const Individual& b) {
                                 return a.fitness > b.fitness;
                             });
            Population next;
            next.capacity = pop.capacity;
            next.members.reserve(pop.capacity);
            for (auto e : elites) {
                if (next.members.size() == pop.capacity) break;
                next.members.push_back(pop.members[e]);
            }
            for (auto& ind : offspring) {
                if (next.members.size() == pop.capacity) break;
                next.members.push_back(std::move(ind));
            }
            pop = std::move(next);
        }

        if (partial) break;
        ++generation;
        if (cfg.on_generation_end) {
            DagaGenerationView view;
            view.generation = generation - 1;
            view.population = &pop;
            view.dae = &dae;
            view.evaluations = eval.count;
            view.train_loss = loss;
            cfg.on_generation_end(view);
        }
    }
    return tracker.result(rng.seed(), generation, eval.count);
}

std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b, std::size_t cut1,
                                              std::size_t cut2) {
    if (a.kind != b.kind || a.length() != b.length())
        throw GenomeTypeError("crossover requires equal-shape genomes");
    if (cut1 > cut2 || cut2 > a.length())
        throw InvalidConfigError("crossover cuts must satisfy 0 <= cut1 <= cut2 <= length");
    Genome c1 = a, c2 = b;
    if (a.kind == GenomeKind::Binary) {
        for (std::size_t i = cut1; i < cut2; ++i) std::swap(c1.bits[i], c2.bits[i]);
    } else {
        for (std::size_t i = cut1; i < cut2; ++i) std::swap(c1.values[i], c2.values[i]);
    }
    return {std::move(c1), std::move(c2)};
}

TrialResult ga_run(const Problem& problem, const GaConfig& cfg, RandomSource& rng) {
    {
        std::vector<std::string> errs;
        if (cfg.population < 2) errs.push_back("population must be >= 2");
        if (cfg.crossover_prob < 0.0 || cfg.crossover_prob > 1.0)
            errs.push_back("crossover_prob must lie in [0, 1]");
        if (cfg.mutation_prob < 0.0 || cfg.mutation_prob > 1.0)
            errs.push_back("mutation_prob must lie in [0, 1]");
        if (cfg.mutation_sigma_sq < 0.0) errs.push_back("mutation_sigma_sq must be >= 0");
        if (problem.kind == GenomeKind::Continuous && cfg.mutation_sigma_sq == 0.0 &&
            cfg.mutation_prob > 0.0)
            errs.push_back("continuous mutation needs mutation_sigma_sq > 0");
        if (cfg.tournament_k < 1) errs.push_back("tournament_k must be >= 1");
        if (cfg.max_evaluations < 1) errs.push_back("max_evaluations must be >= 1");
        fail_config(errs);
    }

    Evaluator eval{&problem};
    RunTracker tracker(problem, cfg.stop_fitness);
    Population pop = init_population(eval, cfg.population, rng);
    observe_population(tracker, pop, 1);

    const double sigma = std::sqrt(cfg.mutation_sigma_sq);
    const std::size_t n = problem.length;

    auto mutate = [&](Genome& g) {
        if (g.kind == GenomeKind::Binary) {
            for (auto& bit : g.bits)
                if (rng.bernoulli(cfg.mutation_prob)) bit ^= 1;
        } else {
            for (std::size_t i = 0; i < g.values.size(); ++i)
                if (rng.bernoulli(cfg.mutation_prob)) {
                    g.values[i] += rng.normal(0.0, sigma);
                    g.values[i] = std::min(problem.upper[i], std::max(problem.lower[i], g.values[i]));
                }
        }
    };

    long long generation = 0;
    while (!tracker.done() && eval.count < cfg.max_evaluations) {
        Population next;
        next.capacity = pop.capacity;
        next.members.reserve(pop.capacity);

        // Elitism of one: carry the best member forward unevaluated.
        const Individual* best = &pop.members[0];
        for (const auto& m : pop.members)
            if (m.fitness > best->fitness) best = &m;
        next.members.push_back(*best);

        bool partial = false;
        while (next.members.size() < pop.capacity) {
            if (eval.count >= cfg.max_evaluations || tracker.done()) {
                partial = true;
                break;
            }
            Genome c1 = tournament_select(pop, cfg.tournament_k, rng).genome;
            Genome c2 = tournament_select(pop, cfg.tournament_k, rng).genome;
            if (rng.bernoulli(cfg.crossover_prob)) {
                std::size_t cut1 = rng.uniform_below(n + 1);
                std::size_t cut2 = rng.uniform_below(n + 1);
                if (cut1 > cut2) std::swap(cut1, cut2);
                auto crossed = two_point_crossover(c1, c2, cut1, cut2);
                c1 = std::move(crossed.first);
                c2 = std::move(crossed.second);
            }
            mutate(c1);
            mutate(c2);

            const double f1 = eval.evaluate(c1);
            Individual i1{std::move(c1), f1};
            tracker.observe(i1, eval.count);
            next.members.push_back(std::move(i1));
            if (next.members.size() == pop.capacity || tracker.done() ||
                eval.count >= cfg.max_evaluations) {
                partial = next.members.size() < pop.capacity;
                break;
            }
            const double f2 = eval.evaluate(c2);
            Individual i2{std::move(c2), f2};
            tracker.observe(i2, eval.count);
            next.members.push_back(std::move(i2));
        }
        if (partial) break;
        pop = std::move(next);
        ++generation;
    }
    return tracker.result(rng.seed(), generation, eval.count);
}

TrialResult es_run(const Problem& problem, const EsConfig& cfg, RandomSource& rng) {
    {
        std::vector<std::string> errs;
        if (problem.kind != GenomeKind::Continuous)
            errs.push_back("(1+1)-ES requires a continuous problem");
        if (cfg.initial_sigma <= 0.0) errs.push_back("initial_sigma must be > 0");
        if (cfg.adaptation_interval < 0) errs.push_back("adaptation_interval must be >= 0");
        if (!(cfg.increase_factor > 1.0))
            errs.push_back("increase_factor must be > 1");
        if (!(cfg.decrease_factor > 0.0 && cfg.decrease_factor < 1.0))
            errs.push_back("decrease_factor must lie in (0, 1)");
        if (cfg.max_evaluations < 1) errs.push_back("max_evaluations must be >= 1");
        fail_config(errs);
    }

    Evaluator eval{&problem};
    RunTracker tracker(problem, std::nullopt);
    const std::size_t n = problem.length;
    const int window = cfg.adaptation_interval > 0 ? cfg.adaptation_interval
                                                   : static_cast<int>(n);

    Genome parent;
    parent.kind = GenomeKind::Continuous;
    parent.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) parent.values[i] = rng.uniform(problem.lower[i], problem.upper[i]);
    double parent_fitness = eval.evaluate(parent);
    tracker.observe(Individual{parent, parent_fitness}, eval.count);

    double sigma = cfg.initial_sigma;
    int successes = 0;
    int mutations = 0;

    Genome child = parent;
    while (!tracker.done() && eval.count < cfg.max_evaluations) {
        for (std::size_t i = 0; i < n; ++i) {
            double v = parent.values[i] + rng.normal(0.0, sigma);
            child.values[i] = std::min(problem.upper[i], std::max(problem.lower[i], v));
        }
        const double f = eval.evaluate(child);
        tracker.observe(Individual{child, f}, eval.count);
        if (f >= parent_fitness) {
            parent = child;
            parent_fitness = f;
            ++successes;
        }
        if (++mutations == window) {
            const double fraction = static_cast<double>(successes) / static_cast<double>(window);
            if (fraction > 0.2)
                sigma *= cfg.increase_factor;
            else if (fraction < 0.2)
                sigma *= cfg.decrease_factor;
            successes = 0;
            mutations = 0;
        }
    }
    return tracker.result(rng.seed(), 0, eval.count);
}

} // namespace daga
