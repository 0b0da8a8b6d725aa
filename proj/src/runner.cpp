#include "daga/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "daga/analysis.hpp"

namespace daga {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::uint64_t fnv1a_text(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

void parse_block(std::istream& in, ConfigNode& node, long& line_no, bool is_root) {
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        if (line == "}") {
            if (is_root) throw ParseError("unmatched '}'", line_no);
            return;
        }
        if (line.back() == '{') {
            const std::string name = trim(line.substr(0, line.size() - 1));
            if (name.empty() || name.find_first_of(" \t=") != std::string::npos)
                throw ParseError("malformed block header '" + line + "'", line_no);
            parse_block(in, node.blocks[name], line_no, false);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value' or 'name {', got '" + line + "'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);
        node.values[key] = value;
    }
    if (!is_root) throw ParseError("missing '}' at end of file", line_no);
}

void canonical_render(const ConfigNode& node, std::string& out, int depth) {
    const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    for (const auto& [k, v] : node.values) out += indent + k + " = " + v + "\n";
    for (const auto& [name, block] : node.blocks) {
        out += indent + name + " {\n";
        canonical_render(block, out, depth + 1);
        out += indent + "}\n";
    }
}

/// Collects config violations so validation can report all of them at once.
struct ConfigReader {
    const ConfigNode& node;
    std::vector<std::string> errors;

    const std::string* find(const ConfigNode& n, const std::string& key) const {
        const auto it = n.values.find(key);
        return it == n.values.end() ? nullptr : &it->second;
    }

    std::string get_string(const ConfigNode& n, const std::string& key, std::string fallback) {
        const auto* v = find(n, key);
        return v ? *v : fallback;
    }

    template <typename T>
    T get_number(const ConfigNode& n, const std::string& key, T fallback, const char* what) {
        const auto* v = find(n, key);
        if (!v) return fallback;
        try {
            if constexpr (std::is_floating_point_v<T>) {
                std::size_t used = 0;
                const double d = std::stod(*v, &used);
                if (used != v->size()) throw std::invalid_argument(*v);
                return static_cast<T>(d);
            } else {
                std::size_t used = 0;
                const long long i = std::stoll(*v, &used);
                if (used != v->size()) throw std::invalid_argument(*v);
                return static_cast<T>(i);
            }
        } catch (const std::logic_error&) {
            errors.push_back(std::string(what) + " '" + key + "' is not a valid number: '" + *v +
                             "'");
            return fallback;
        }
    }

    bool get_bool(const ConfigNode& n, const std::string& key, bool fallback) {
        const auto* v = find(n, key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1") return true;
        if (*v == "false" || *v == "0") return false;
        errors.push_back("'" + key + "' must be true or false, got '" + *v + "'");
        return fallback;
    }
};

} // namespace

ConfigNode parse_config_text(const std::string& text) {
    std::istringstream in(text);
    ConfigNode root;
    long line_no = 0;
    parse_block(in, root, line_no, true);
    return root;
}

void apply_override(ConfigNode& node, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw InvalidConfigError("override must look like key=value or block.key=value, got '" +
                                 assignment + "'");
    std::string path = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    ConfigNode* cur = &node;
    std::size_t start = 0;
    for (auto dot = path.find('.'); dot != std::string::npos; dot = path.find('.', start)) {
        cur = &cur->blocks[path.substr(start, dot - start)];
        start = dot + 1;
    }
    const std::string key = path.substr(start);
    if (key.empty()) throw InvalidConfigError("override has an empty key: '" + assignment + "'");
    cur->values[key] = value;
}

std::string canonical_config_text(const ConfigNode& node) {
    std::string out;
    canonical_render(node, out, 0);
    return out;
}

ExperimentConfig experiment_config_from_node(ConfigNode node, const std::string& base_dir) {
    ConfigReader reader{node, {}};
    ExperimentConfig cfg;

    cfg.problem = reader.get_string(node, "problem", "");
    cfg.instance = reader.get_string(node, "instance", "");
    cfg.mask = reader.get_bool(node, "mask", false);
    cfg.rosenbrock_literal = reader.get_bool(node, "rosenbrock_literal", false);
    cfg.algorithm = reader.get_string(node, "algorithm", "");
    cfg.trials = reader.get_number<int>(node, "trials", 1, "experiment");
    cfg.base_seed = reader.get_number<std::uint64_t>(node, "base_seed", 1, "experiment");
    cfg.output = reader.get_string(node, "output", "out");
    if (reader.find(node, "optimum"))
        cfg.optimum_override = reader.get_number<double>(node, "optimum", 0.0, "experiment");
    if (reader.find(node, "target"))
        cfg.target_override = reader.get_number<double>(node, "target", 0.0, "experiment");
    if (reader.find(node, "stop_best"))
        cfg.stop_best = reader.get_number<double>(node, "stop_best", 0.0, "experiment");

    if (cfg.problem.empty()) reader.errors.push_back("missing 'problem'");
    if (cfg.algorithm != "daga" && cfg.algorithm != "ga" && cfg.algorithm != "es")
        reader.errors.push_back("'algorithm' must be daga, ga or es, got '" + cfg.algorithm + "'");
    if (cfg.trials < 1) reader.errors.push_back("'trials' must be >= 1");

    if (!cfg.instance.empty() && !base_dir.empty()) {
        fs::path p(cfg.instance);
        if (p.is_relative()) p = fs::path(base_dir) / p;
        cfg.instance = p.lexically_normal().string();
    }
    if (!cfg.instance.empty() && !fs::exists(cfg.instance))
        reader.errors.push_back("instance file does not exist: " + cfg.instance);

    const auto block_or_empty = [&node](const std::string& name) -> const ConfigNode& {
        static const ConfigNode empty;
        const auto it = node.blocks.find(name);
        return it == node.blocks.end() ? empty : it->second;
    };

    {
        const ConfigNode& b = block_or_empty("daga");
        auto& d = cfg.daga;
        d.population = reader.get_number<std::size_t>(b, "population", d.population, "daga");
        d.trunc_percent = reader.get_number<double>(b, "trunc_percent", d.trunc_percent, "daga");
        d.epochs = reader.get_number<int>(b, "epochs", d.epochs, "daga");
        d.learning_rate = reader.get_number<double>(b, "learning_rate", d.learning_rate, "daga");
        d.corruption_rate = reader.get_number<double>(b, "corruption", d.corruption_rate, "daga");
        d.hidden_size = reader.get_number<std::size_t>(b, "hidden", d.hidden_size, "daga");
        d.tournament_k = reader.get_number<int>(b, "tournament_k", d.tournament_k, "daga");
        d.max_evaluations =
            reader.get_number<long long>(b, "max_evaluations", d.max_evaluations, "daga");
        d.reinit_weights = reader.get_bool(b, "reinit_weights", d.reinit_weights);
        d.minibatch_size =
            reader.get_number<std::size_t>(b, "minibatch", d.minibatch_size, "daga");
        d.max_generations =
            reader.get_number<long long>(b, "max_generations", d.max_generations, "daga");
        const std::string niching = reader.get_string(b, "niching_window", "none");
        if (niching != "none" && niching != "") {
            const auto w = reader.get_number<long long>(b, "niching_window", 0, "daga");
            if (w >= 1)
                d.rtr = RtrSpec{static_cast<std::size_t>(w)};
            else
                reader.errors.push_back("daga 'niching_window' must be a positive integer or none");
        }
        d.sampler.sigma_squared =
            reader.get_number<double>(b, "sigma_squared", d.sampler.sigma_squared, "daga");
    }
    {
        const ConfigNode& b = block_or_empty("ga");
        auto& g = cfg.ga;
        g.population = reader.get_number<std::size_t>(b, "population", g.population, "ga");
        g.crossover_prob = reader.get_number<double>(b, "crossover_prob", g.crossover_prob, "ga");
        g.mutation_prob = reader.get_number<double>(b, "mutation_prob", g.mutation_prob, "ga");
        g.mutation_sigma_sq =
            reader.get_number<double>(b, "mutation_sigma_sq", g.mutation_sigma_sq, "ga");
        g.tournament_k = reader.get_number<int>(b, "tournament_k", g.tournament_k, "ga");
        g.max_evaluations =
            reader.get_number<long long>(b, "max_evaluations", g.max_evaluations, "ga");
    }
    {
        const ConfigNode& b = block_or_empty("es");
        auto& e = cfg.es;
        e.initial_sigma = reader.get_number<double>(b, "initial_sigma", e.initial_sigma, "es");
        e.adaptation_interval =
            reader.get_number<int>(b, "adaptation_interval", e.adaptation_interval, "es");
        e.increase_factor =
            reader.get_number<double>(b, "increase_factor", e.increase_factor, "es");
        e.decrease_factor =
            reader.get_number<double>(b, "decrease_factor", e.decrease_factor, "es");
        e.max_evaluations =
            reader.get_number<long long>(b, "max_evaluations", e.max_evaluations, "es");
    }

    // Range checks mirror the engine-side validation so validate-config can
    // enumerate every problem before anything runs.
    if (cfg.algorithm == "daga") {
        const auto& d = cfg.daga;
        if (d.population < 1) reader.errors.push_back("daga population must be >= 1");
        if (d.trunc_percent <= 0.0 || d.trunc_percent > 100.0)
            reader.errors.push_back("daga trunc_percent must lie in (0, 100]");
        if (d.epochs < 0) reader.errors.push_back("daga epochs must be >= 0");
        if (d.learning_rate <= 0.0) reader.errors.push_back("daga learning_rate must be > 0");
        if (d.corruption_rate < 0.0 || d.corruption_rate > 1.0)
            reader.errors.push_back("daga corruption must lie in [0, 1]");
        if (d.hidden_size < 1) reader.errors.push_back("daga hidden must be >= 1");
        if (d.tournament_k < 1) reader.errors.push_back("daga tournament_k must be >= 1");
        if (d.max_evaluations < 1) reader.errors.push_back("daga max_evaluations must be >= 1");
        if (d.rtr && (d.rtr->window < 1 || d.rtr->window > d.population))
            reader.errors.push_back("daga niching_window must lie in [1, population]");
        if (d.sampler.sigma_squared < 0.0)
            reader.errors.push_back("daga sigma_squared must be >= 0");
    } else if (cfg.algorithm == "ga") {
        const auto& g = cfg.ga;
        if (g.population < 2) reader.errors.push_back("ga population must be >= 2");
        if (g.crossover_prob < 0.0 || g.crossover_prob > 1.0)
            reader.errors.push_back("ga crossover_prob must lie in [0, 1]");
        if (g.mutation_prob < 0.0 || g.mutation_prob > 1.0)
            reader.errors.push_back("ga mutation_prob must lie in [0, 1]");
        if (g.mutation_sigma_sq < 0.0) reader.errors.push_back("ga mutation_sigma_sq must be >= 0");
        if (g.tournament_k < 1) reader.errors.push_back("ga tournament_k must be >= 1");
        if (g.max_evaluations < 1) reader.errors.push_back("ga max_evaluations must be >= 1");
    } else if (cfg.algorithm == "es") {
        const auto& e = cfg.es;
        if (e.initial_sigma <= 0.0) reader.errors.push_back("es initial_sigma must be > 0");
        if (e.adaptation_interval < 0)
            reader.errors.push_back("es adaptation_interval must be >= 0");
        if (!(e.increase_factor > 1.0)) reader.errors.push_back("es increase_factor must be > 1");
        if (!(e.decrease_factor > 0.0 && e.decrease_factor < 1.0))
            reader.errors.push_back("es decrease_factor must lie in (0, 1)");
        if (e.max_evaluations < 1) reader.errors.push_back("es max_evaluations must be >= 1");
    }

    if (!reader.errors.empty()) {
        std::string msg = "invalid experiment config:";
        for (const auto& e : reader.errors) msg += "\n  - " + e;
        throw InvalidConfigError(msg);
    }

    cfg.resolved_text = canonical_config_text(experiment_config_to_node(cfg));
    return cfg;
}

ConfigNode experiment_config_to_node(const ExperimentConfig& cfg) {
    ConfigNode node;
    node.values["problem"] = cfg.problem;
    if (!cfg.instance.empty()) node.values["instance"] = cfg.instance;
    if (cfg.mask) node.values["mask"] = "true";
    if (cfg.optimum_override) node.values["optimum"] = format_double(*cfg.optimum_override);
    if (cfg.target_override) node.values["target"] = format_double(*cfg.target_override);
    if (cfg.stop_best) node.values["stop_best"] = format_double(*cfg.stop_best);
    if (cfg.rosenbrock_literal) node.values["rosenbrock_literal"] = "true";
    node.values["algorithm"] = cfg.algorithm;
    node.values["trials"] = std::to_string(cfg.trials);
    node.values["base_seed"] = std::to_string(cfg.base_seed);
    node.values["output"] = cfg.output;

    if (cfg.algorithm == "daga") {
        ConfigNode& b = node.blocks["daga"];
        b.values["population"] = std::to_string(cfg.daga.population);
        b.values["trunc_percent"] = format_double(cfg.daga.trunc_percent);
        b.values["epochs"] = std::to_string(cfg.daga.epochs);
        b.values["learning_rate"] = format_double(cfg.daga.learning_rate);
        b.values["corruption"] = format_double(cfg.daga.corruption_rate);
        b.values["hidden"] = std::to_string(cfg.daga.hidden_size);
        b.values["niching_window"] =
            cfg.daga.rtr ? std::to_string(cfg.daga.rtr->window) : std::string("none");
        b.values["sigma_squared"] = format_double(cfg.daga.sampler.sigma_squared);
        b.values["tournament_k"] = std::to_string(cfg.daga.tournament_k);
        b.values["max_evaluations"] = std::to_string(cfg.daga.max_evaluations);
        b.values["reinit_weights"] = cfg.daga.reinit_weights ? "true" : "false";
        b.values["minibatch"] = std::to_string(cfg.daga.minibatch_size);
        b.values["max_generations"] = std::to_string(cfg.daga.max_generations);
    } else if (cfg.algorithm == "ga") {
        ConfigNode& b = node.blocks["ga"];
        b.values["population"] = std::to_string(cfg.ga.population);
        b.values["crossover_prob"] = format_double(cfg.ga.crossover_prob);
        b.values["mutation_prob"] = format_double(cfg.ga.mutation_prob);
        b.values["mutation_sigma_sq"] = format_double(cfg.ga.mutation_sigma_sq);
        b.values["tournament_k"] = std::to_string(cfg.ga.tournament_k);
        b.values["max_evaluations"] = std::to_string(cfg.ga.max_evaluations);
    } else if (cfg.algorithm == "es") {
        ConfigNode& b = node.blocks["es"];
        b.values["initial_sigma"] = format_double(cfg.es.initial_sigma);
        b.values["adaptation_interval"] = std::to_string(cfg.es.adaptation_interval);
        b.values["increase_factor"] = format_double(cfg.es.increase_factor);
        b.values["decrease_factor"] = format_double(cfg.es.decrease_factor);
        b.values["max_evaluations"] = std::to_string(cfg.es.max_evaluations);
    }
    return node;
}

ExperimentConfig load_experiment_config(const std::string& path,
                                        const std::vector<std::string>& overrides) {
    ConfigNode node = parse_config_text(read_file(path));
    for (const auto& o : overrides) apply_override(node, o);
    return experiment_config_from_node(std::move(node),
                                       fs::path(path).parent_path().string());
}

Problem make_problem(const ExperimentConfig& cfg) {
    const std::string& name = cfg.problem;
    const auto dash = name.rfind('-');
    const auto suffix_num = [&]() -> std::optional<std::size_t> {
        if (dash == std::string::npos) return std::nullopt;
        const std::string tail = name.substr(dash + 1);
        if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
            return std::nullopt;
        return static_cast<std::size_t>(std::stoull(tail));
    }();

    Problem p;
    if (name.starts_with("maxones-") && suffix_num) {
        p = make_maxones(*suffix_num);
    } else if (name.starts_with("hiff-") && suffix_num) {
        p = make_hiff(*suffix_num);
    } else if (name.starts_with("royalroad-") && suffix_num) {
        p = make_royal_road(*suffix_num);
    } else if (name == "maxsat") {
        if (cfg.instance.empty()) throw InvalidConfigError("maxsat needs an instance file");
        p = make_maxsat(parse_dimacs(read_file(cfg.instance)), cfg.optimum_override);
    } else if (name == "knapsack") {
        if (cfg.instance.empty()) throw InvalidConfigError("knapsack needs an instance file");
        p = make_knapsack(parse_knapsack(read_file(cfg.instance)));
    } else if (name.starts_with("sphere-") && suffix_num) {
        p = make_sphere(*suffix_num, cfg.target_override.value_or(0.1));
    } else if (name.starts_with("rosenbrock-") && suffix_num) {
        p = make_rosenbrock(*suffix_num, cfg.target_override.value_or(0.1),
                            cfg.rosenbrock_literal);
    } else if (name.starts_with("rastrigin-") && suffix_num) {
        p = make_rastrigin(*suffix_num, cfg.target_override.value_or(1.0));
    } else if (name.starts_with("pattern-")) {
        PatternTarget box = box_pattern();
        PatternTarget cross = cross_pattern();
        if (!cfg.instance.empty()) {
            const auto patterns = parse_patterns(read_file(cfg.instance));
            for (const auto& t : patterns) {
                if (t.name == "box") box = t;
                if (t.name == "cross") cross = t;
            }
        }
        const std::string which = name.substr(8);
        if (which == "box") {
            p = make_pattern_problem(box);
        } else if (which == "cross") {
            p = make_pattern_problem(cross);
        } else if (which.starts_with("hybrid-")) {
            const auto patterns = make_combined_patterns(box, cross);
            const std::string idx = which.substr(7);
            if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos ||
                std::stoul(idx) > 15)
                throw InvalidConfigError("pattern hybrid index must lie in [0, 15]");
            p = make_pattern_problem(patterns[std::stoul(idx)]);
        } else {
            throw InvalidConfigError("unknown pattern problem: " + name);
        }
    } else {
        throw InvalidConfigError("unknown problem: " + name);
    }

    if (cfg.optimum_override && name != "maxsat") p.optimum = cfg.optimum_override;
    return p;
}

namespace {

TrialResult execute_trial(const ExperimentConfig& cfg, const Problem& base_problem,
                          std::uint64_t seed) {
    RandomSource rng(seed);
    // The per-trial mask, when enabled, is drawn before the engine touches the
    // stream so serial and parallel execution agree.
    Problem problem = base_problem;
    if (cfg.mask) problem = masked(std::move(problem), random_mask(base_problem.length, rng));

    const auto internal_stop = [&]() -> std::optional<double> {
        if (!cfg.stop_best) return std::nullopt;
        return problem.minimizing ? -*cfg.stop_best : *cfg.stop_best;
    }();

    if (cfg.algorithm == "daga") {
        DagaConfig dcfg = cfg.daga;
        dcfg.sampler.mode = problem.kind == GenomeKind::Binary ? SamplerMode::Bernoulli
                                                               : SamplerMode::Gaussian;
        dcfg.stop_fitness = internal_stop;
        return daga_run(problem, dcfg, rng);
    }
    if (cfg.algorithm == "ga") {
        GaConfig gcfg = cfg.ga;
        gcfg.stop_fitness = internal_stop;
        return ga_run(problem, gcfg, rng);
    }
    return es_run(problem, cfg.es, rng);
}

RunSummary summarize(const ExperimentConfig& cfg, const Problem& problem,
                     const std::vector<TrialResult>& results) {
    RunSummary s;
    s.problem = cfg.problem;
    s.algorithm = cfg.algorithm;
    s.trials = static_cast<int>(results.size());
    s.min_best = std::numeric_limits<double>::infinity();
    s.max_best = -std::numeric_limits<double>::infinity();
    double sum = 0.0, evals = 0.0;
    int successes = 0;
    for (const auto& r : results) {
        const double best = problem.domain_value(r.best.fitness);
        s.min_best = std::min(s.min_best, best);
        s.max_best = std::max(s.max_best, best);
        sum += best;
        evals += static_cast<double>(r.evals_to_optimum.value_or(r.evaluations));
        successes += r.success ? 1 : 0;
    }
    s.mean_best = sum / static_cast<double>(results.size());
    double var = 0.0;
    for (const auto& r : results) {
        const double d = problem.domain_value(r.best.fitness) - s.mean_best;
        var += d * d;
    }
    s.std_best = results.size() > 1
                     ? std::sqrt(var / static_cast<double>(results.size() - 1))
                     : 0.0;
    s.mean_evals = evals / static_cast<double>(results.size());
    s.success_rate = static_cast<double>(successes) / static_cast<double>(results.size());
    return s;
}

} // namespace

std::string summary_tsv(const RunSummary& s) {
    std::string out =
        "problem\talgorithm\ttrials\tmin_best\tmax_best\tmean_best\tstd_best\tmean_evals\tsuccess_"
        "rate\n";
    out += s.problem + "\t" + s.algorithm + "\t" + std::to_string(s.trials) + "\t" +
           format_double(s.min_best) + "\t" + format_double(s.max_best) + "\t" +
           format_double(s.mean_best) + "\t" + format_double(s.std_best) + "\t" +
           format_double(s.mean_evals) + "\t" + format_double(s.success_rate) + "\n";
    return out;
}

RunOutput run_trials(const ExperimentConfig& cfg, int workers) {
    const Problem problem = make_problem(cfg);
    RunOutput out;
    out.results.resize(static_cast<std::size_t>(cfg.trials));

    const int pool = std::max(1, std::min(workers, cfg.trials));
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const auto work = [&]() {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= cfg.trials) return;
            try {
                out.results[static_cast<std::size_t>(i)] =
                    execute_trial(cfg, problem, cfg.base_seed + static_cast<std::uint64_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    if (pool == 1) {
        work();
    } else {
        threads.reserve(static_cast<std::size_t>(pool));
        for (int t = 0; t < pool; ++t) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    out.rows.reserve(out.results.size());
    for (const auto& r : out.results) {
        TrialRow row;
        row.problem = cfg.problem;
        row.algorithm = cfg.algorithm;
        row.seed = r.seed;
        row.best = problem.domain_value(r.best.fitness);
        row.evals_to_success = r.evals_to_optimum;
        row.success = r.success;
        out.rows.push_back(std::move(row));
    }
    out.summary = summarize(cfg, problem, out.results);
    return out;
}

RunOutput run_experiment(const ExperimentConfig& cfg, int workers) {
    RunOutput out = run_trials(cfg, workers);

    fs::create_directories(cfg.output);
    write_file((fs::path(cfg.output) / "results.csv").string(), write_csv(out.rows));
    write_file((fs::path(cfg.output) / "summary.tsv").string(), summary_tsv(out.summary));

    // Serialize the effective configuration, not the loaded file: callers may
    // have adjusted fields after loading.
    const std::string resolved = canonical_config_text(experiment_config_to_node(cfg));
    nlohmann::ordered_json manifest;
    manifest["tool"] = "daga";
    manifest["version"] = 1;
    manifest["config_hash"] = hex64(fnv1a_text(resolved));
    manifest["resolved_config"] = resolved;
    manifest["base_seed"] = cfg.base_seed;
    manifest["trials"] = cfg.trials;
    std::vector<std::uint64_t> seeds;
    seeds.reserve(static_cast<std::size_t>(cfg.trials));
    for (int i = 0; i < cfg.trials; ++i) seeds.push_back(cfg.base_seed + static_cast<std::uint64_t>(i));
    manifest["seeds"] = seeds;
    write_file((fs::path(cfg.output) / "manifest.json").string(), manifest.dump(2) + "\n");
    return out;
}

ExperimentConfig config_from_manifest(const std::string& manifest_path) {
    const auto manifest = nlohmann::json::parse(read_file(manifest_path));
    if (!manifest.contains("resolved_config"))
        throw ParseError("manifest missing resolved_config: " + manifest_path, 0);
    ConfigNode node = parse_config_text(manifest["resolved_config"].get<std::string>());
    ExperimentConfig cfg = experiment_config_from_node(std::move(node), "");
    const std::string stored_hash = manifest.value("config_hash", "");
    if (!stored_hash.empty() && stored_hash != hex64(fnv1a_text(cfg.resolved_text)))
        throw ParseError("manifest config hash does not match its resolved config", 0);
    return cfg;
}

ComparisonReport compare_results(const std::vector<TrialRow>& a, const std::vector<TrialRow>& b) {
    if (a.empty() || b.empty()) throw InvalidConfigError("comparison needs non-empty result sets");
    for (const auto& row : a)
        if (row.problem != a.front().problem)
            throw InvalidConfigError("result set A mixes problems");
    for (const auto& row : b)
        if (row.problem != a.front().problem)
            throw InvalidConfigError("comparison requires results for the same problem, got '" +
                                     a.front().problem + "' vs '" + row.problem + "'");

    const auto bests = [](const std::vector<TrialRow>& rows) {
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& r : rows) v.push_back(r.best);
        return v;
    };
    const auto evals = [](const std::vector<TrialRow>& rows) {
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& r : rows)
            v.push_back(r.evals_to_success ? static_cast<double>(*r.evals_to_success)
                                           : std::numeric_limits<double>::infinity());
        return v;
    };

    const auto side_summary = [](const std::vector<TrialRow>& rows) {
        RunSummary s;
        s.problem = rows.front().problem;
        s.algorithm = rows.front().algorithm;
        s.trials = static_cast<int>(rows.size());
        s.min_best = std::numeric_limits<double>::infinity();
        s.max_best = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        int successes = 0;
        double evals_sum = 0.0;
        int evals_count = 0;
        for (const auto& r : rows) {
            s.min_best = std::min(s.min_best, r.best);
            s.max_best = std::max(s.max_best, r.best);
            sum += r.best;
            successes += r.success;
            if (r.evals_to_success) {
                evals_sum += static_cast<double>(*r.evals_to_success);
                ++evals_count;
            }
        }
        s.mean_best = sum / static_cast<double>(rows.size());
        double var = 0.0;
        for (const auto& r : rows) var += (r.best - s.mean_best) * (r.best - s.mean_best);
        s.std_best =
            rows.size() > 1 ? std::sqrt(var / static_cast<double>(rows.size() - 1)) : 0.0;
        s.mean_evals = evals_count > 0 ? evals_sum / evals_count : 0.0;
        s.success_rate = static_cast<double>(successes) / static_cast<double>(rows.size());
        return s;
    };

    ComparisonReport report;
    report.problem = a.front().problem;
    report.a = side_summary(a);
    report.b = side_summary(b);
    report.p_best = rank_sum_test(bests(a), bests(b));
    report.p_evals = rank_sum_test(evals(a), evals(b));
    report.best_significant = report.p_best < 0.05;
    report.evals_significant = report.p_evals < 0.05;

    std::ostringstream text;
    text << "problem: " << report.problem << "\n";
    const auto render = [&text](const RunSummary& s) {
        text << "  " << s.algorithm << ": trials " << s.trials << ", min " << s.min_best
             << ", max " << s.max_best << ", mean " << s.mean_best << " +- " << s.std_best
             << ", mean evals-to-success " << s.mean_evals << ", success "
             << 100.0 * s.success_rate << "%\n";
    };
    render(report.a);
    render(report.b);
    text << "  rank-sum p (best): " << report.p_best
         << (report.best_significant ? "  [significant at 0.05]" : "") << "\n";
    text << "  rank-sum p (evals-to-success): " << report.p_evals
         << (report.evals_significant ? "  [significant at 0.05]" : "") << "\n";
    report.text = text.str();
    return report;
}

int default_worker_count() {
    if (const char* env = std::getenv("DAGA_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace daga
