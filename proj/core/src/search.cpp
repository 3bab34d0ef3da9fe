#include "mrforge/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mrforge/errors.hpp"

namespace mrforge::search {

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::single_ga: return "single_ga";
        case Algorithm::nsga2: return "nsga2";
        case Algorithm::spea2: return "spea2";
        case Algorithm::moead: return "moead";
        case Algorithm::random_search: return "random";
    }
    return "?";
}

Algorithm algorithm_from_string(std::string_view name) {
    if (name == "single_ga") return Algorithm::single_ga;
    if (name == "nsga2") return Algorithm::nsga2;
    if (name == "spea2") return Algorithm::spea2;
    if (name == "moead") return Algorithm::moead;
    if (name == "random" || name == "random_search") return Algorithm::random_search;
    throw ConfigError("unknown algorithm: " + std::string(name));
}

void SearchConfig::validate() const {
    auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (population_size < 1) throw ConfigError("population_size must be >= 1");
    if (!in_unit(crossover_rate)) throw ConfigError("crossover_rate must lie in [0,1]");
    if (!in_unit(mutation_rate)) throw ConfigError("mutation_rate must lie in [0,1]");
    double sum = 0.0;
    for (double w : mutation_op_weights) {
        if (w < 0.0) throw ConfigError("mutation_op_weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) >= 1e-9)
        throw ConfigError("mutation_op_weights must sum to 1 within 1e-9");
    if (max_iterations < 1 || max_iterations > hard_iteration_cap)
        throw ConfigError("max_iterations must lie in [1," +
                          std::to_string(hard_iteration_cap) + "]");
    if (fitness_delta_threshold < 0.0) throw ConfigError("fitness_delta_threshold must be >= 0");
    if (patience < 1) throw ConfigError("patience must be >= 1");
    if (group_min < 1 || group_max < group_min)
        throw ConfigError("group bounds must satisfy 1 <= group_min <= group_max");
    if (max_combo_depth < 1) throw ConfigError("max_combo_depth must be >= 1");
    if (!in_unit(and_probability)) throw ConfigError("and_probability must lie in [0,1]");
    if (weights.w1 < 0.0 || weights.w2 < 0.0) throw ConfigError("weights must be non-negative");
    if (inputs_per_iteration < 1) throw ConfigError("inputs_per_iteration must be >= 1");
    if (!in_unit(sim_threshold)) throw ConfigError("sim_threshold must lie in [0,1]");
    if (set_mr_intensities.empty()) throw ConfigError("set_mr_intensities must be non-empty");
    if (moead_neighborhood < 2) throw ConfigError("moead_neighborhood must be >= 2");
    if (moead_replacement_limit < 1) throw ConfigError("moead_replacement_limit must be >= 1");
    if (elite_capacity < 1) throw ConfigError("elite_capacity must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
}

nlohmann::ordered_json config_to_json(const SearchConfig& c) {
    return {{"population_size", c.population_size},
            {"crossover_rate", c.crossover_rate},
            {"mutation_rate", c.mutation_rate},
            {"mutation_op_weights", c.mutation_op_weights},
            {"max_iterations", c.max_iterations},
            {"fitness_delta_threshold", c.fitness_delta_threshold},
            {"patience", c.patience},
            {"group_min", c.group_min},
            {"group_max", c.group_max},
            {"max_combo_depth", c.max_combo_depth},
            {"and_probability", c.and_probability},
            {"weights", {c.weights.w1, c.weights.w2}},
            {"inputs_per_iteration", c.inputs_per_iteration},
            {"seed", c.seed},
            {"sim_threshold", c.sim_threshold},
            {"set_mr_intensities", c.set_mr_intensities},
            {"moead_neighborhood", c.moead_neighborhood},
            {"moead_replacement_limit", c.moead_replacement_limit},
            {"random_metric", c.random_metric == RandomMetric::scalarized
                                  ? "scalarized"
                                  : "effectiveness_only"},
            {"elite_capacity", c.elite_capacity},
            {"workers", c.workers}};
}

SearchConfig config_from_json(const nlohmann::json& j) {
    SearchConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("population_size", c.population_size);
    get("crossover_rate", c.crossover_rate);
    get("mutation_rate", c.mutation_rate);
    if (j.contains("mutation_op_weights")) {
        auto w = j.at("mutation_op_weights").get<std::vector<double>>();
        if (w.size() != 6) throw ConfigError("mutation_op_weights must have 6 entries");
        std::copy(w.begin(), w.end(), c.mutation_op_weights.begin());
    }
    get("max_iterations", c.max_iterations);
    get("fitness_delta_threshold", c.fitness_delta_threshold);
    get("patience", c.patience);
    get("group_min", c.group_min);
    get("group_max", c.group_max);
    get("max_combo_depth", c.max_combo_depth);
    get("and_probability", c.and_probability);
    if (j.contains("weights")) {
        auto w = j.at("weights").get<std::vector<double>>();
        if (w.size() != 2) throw ConfigError("weights must have 2 entries");
        c.weights = {w[0], w[1]};
    }
    get("inputs_per_iteration", c.inputs_per_iteration);
    get("seed", c.seed);
    get("sim_threshold", c.sim_threshold);
    get("set_mr_intensities", c.set_mr_intensities);
    get("moead_neighborhood", c.moead_neighborhood);
    get("moead_replacement_limit", c.moead_replacement_limit);
    if (j.contains("random_metric")) {
        std::string m = j.at("random_metric").get<std::string>();
        if (m == "scalarized")
            c.random_metric = RandomMetric::scalarized;
        else if (m == "effectiveness_only")
            c.random_metric = RandomMetric::effectiveness_only;
        else
            throw ConfigError("random_metric must be scalarized or effectiveness_only");
    }
    get("elite_capacity", c.elite_capacity);
    get("workers", c.workers);
    return c;
}

bool dominates(const fitness::EvalOutcome& a, const fitness::EvalOutcome& b) {
    return a.fitness1 <= b.fitness1 && a.fitness2 <= b.fitness2 &&
           (a.fitness1 < b.fitness1 || a.fitness2 < b.fitness2);
}

Archive::Archive(ArchiveKind kind, std::optional<std::size_t> capacity)
    : kind_(kind), capacity_(capacity) {}

void Archive::offer(const mrspace::MRGroup& group, const fitness::EvalOutcome& outcome) {
    if (kind_ == ArchiveKind::elite) {
        for (auto& e : entries_) {
            if (e.group.id == group.id) {
                if (outcome.fitness_single < e.outcome.fitness_single) e.outcome = outcome;
                std::stable_sort(entries_.begin(), entries_.end(),
                                 [](const ArchiveEntry& a, const ArchiveEntry& b) {
                                     if (a.outcome.fitness_single != b.outcome.fitness_single)
                                         return a.outcome.fitness_single <
                                                b.outcome.fitness_single;
                                     if (a.outcome.c_token != b.outcome.c_token)
                                         return a.outcome.c_token < b.outcome.c_token;
                                     return a.group.id < b.group.id;
                                 });
                return;
            }
        }
        entries_.push_back({group, outcome});
        std::stable_sort(entries_.begin(), entries_.end(),
                         [](const ArchiveEntry& a, const ArchiveEntry& b) {
                             if (a.outcome.fitness_single != b.outcome.fitness_single)
                                 return a.outcome.fitness_single < b.outcome.fitness_single;
                             if (a.outcome.c_token != b.outcome.c_token)
                                 return a.outcome.c_token < b.outcome.c_token;
                             return a.group.id < b.group.id;
                         });
        if (capacity_ && entries_.size() > *capacity_) entries_.resize(*capacity_);
        return;
    }
    // pareto
    for (const auto& e : entries_) {
        if (dominates(e.outcome, outcome)) return;
    }
    for (const auto& e : entries_) {
        if (e.group.id == group.id && !dominates(outcome, e.outcome)) return;
    }
    std::erase_if(entries_, [&](const ArchiveEntry& e) {
        return dominates(outcome, e.outcome) || e.group.id == group.id;
    });
    entries_.push_back({group, outcome});
}

const ArchiveEntry& Archive::best() const {
    if (entries_.empty()) throw EmptyPopulationError("archive is empty");
    if (kind_ == ArchiveKind::elite) return entries_.front();
    const ArchiveEntry* best = &entries_.front();
    for (const auto& e : entries_) {
        if (e.outcome.fitness_single < best->outcome.fitness_single ||
            (e.outcome.fitness_single == best->outcome.fitness_single &&
             e.outcome.c_token < best->outcome.c_token))
            best = &e;
    }
    return *best;
}

std::vector<std::array<double, 2>> Archive::objective_points() const {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(entries_.size());
    for (const auto& e : entries_) pts.push_back({e.outcome.fitness1, e.outcome.fitness2});
    return pts;
}

Comparator single_objective_comparator(const fitness::Weights&) {
    return [](const Individual& a, const Individual& b) {
        if (a.outcome.fitness_single < b.outcome.fitness_single) return -1;
        if (a.outcome.fitness_single > b.outcome.fitness_single) return 1;
        return 0;
    };
}

Comparator dominance_comparator() {
    return [](const Individual& a, const Individual& b) {
        if (dominates(a.outcome, b.outcome)) return -1;
        if (dominates(b.outcome, a.outcome)) return 1;
        return 0;
    };
}

const Individual& tournament_select(const std::vector<Individual>& population,
                                    const Comparator& better, SeededRng& rng) {
    if (population.empty()) throw EmptyPopulationError("tournament_select: empty population");
    if (population.size() == 1) return population.front();
    std::size_t i = rng.below(population.size());
    std::size_t j = rng.below(population.size() - 1);
    if (j >= i) ++j;
    const Individual& a = population[i];
    const Individual& b = population[j];
    int cmp = better(a, b);
    if (cmp < 0) return a;
    if (cmp > 0) return b;
    if (a.outcome.c_token != b.outcome.c_token)
        return a.outcome.c_token < b.outcome.c_token ? a : b;
    return rng.bernoulli(0.5) ? a : b;
}

std::pair<mrspace::MRGroup, mrspace::MRGroup> crossover(
    const mrspace::MRGroup& p1, const mrspace::MRGroup& p2,
    const std::vector<mrspace::SingleMR>& set_mr, const SearchConfig& config, SeededRng& rng) {
    auto cut = [&](const mrspace::MRGroup& p) -> std::size_t {
        if (p.members.size() < 2) return p.members.size();
        return 1 + rng.below(p.members.size() - 1);
    };
    std::size_t c1 = cut(p1);
    std::size_t c2 = cut(p2);
    std::vector<mrspace::CmbMR> m1(p1.members.begin(),
                                   p1.members.begin() + static_cast<std::ptrdiff_t>(c1));
    m1.insert(m1.end(), p2.members.begin() + static_cast<std::ptrdiff_t>(c2), p2.members.end());
    std::vector<mrspace::CmbMR> m2(p2.members.begin(),
                                   p2.members.begin() + static_cast<std::ptrdiff_t>(c2));
    m2.insert(m2.end(), p1.members.begin() + static_cast<std::ptrdiff_t>(c1), p1.members.end());
    auto bounds = config.bounds();
    m1 = mrspace::detail::repair_size(std::move(m1), set_mr, bounds, rng);
    m2 = mrspace::detail::repair_size(std::move(m2), set_mr, bounds, rng);
    return {mrspace::MRGroup::make(std::move(m1)), mrspace::MRGroup::make(std::move(m2))};
}

mrspace::CmbMR random_cmb_mr(const std::vector<mrspace::SingleMR>& set_mr,
                             const SearchConfig& config, SeededRng& rng) {
    mrspace::CmbMR cmb;
    std::size_t depth = 1 + rng.below(static_cast<std::uint64_t>(config.max_combo_depth));
    for (std::size_t i = 0; i < depth; ++i)
        cmb.parts.push_back(set_mr[rng.below(set_mr.size())]);
    return cmb;
}

std::array<bool, 6> eligible_ops(const mrspace::MRGroup& g, const SearchConfig& config) {
    const int size = static_cast<int>(g.members.size());
    bool has_shallow = false;
    bool has_multi = false;
    for (const auto& m : g.members) {
        if (static_cast<int>(m.parts.size()) < config.max_combo_depth) has_shallow = true;
        if (m.parts.size() >= 2) has_multi = true;
    }
    std::array<bool, 6> elig{};
    elig[static_cast<int>(MutationOp::mr_add)] = size < config.group_max;
    elig[static_cast<int>(MutationOp::mr_delete)] = size > config.group_min;
    elig[static_cast<int>(MutationOp::mr_replace)] = size > 0;
    elig[static_cast<int>(MutationOp::comb_add)] = has_shallow;
    elig[static_cast<int>(MutationOp::comb_delete)] = has_multi && size < config.group_max;
    elig[static_cast<int>(MutationOp::comb_replace)] = has_multi && size < config.group_max;
    return elig;
}

namespace {

std::optional<MutationOp> draw_operator(const std::array<bool, 6>& elig,
                                        const std::array<double, 6>& weights, SeededRng& rng) {
    double total = 0.0;
    for (int i = 0; i < 6; ++i) {
        if (elig[i]) total += weights[i];
    }
    if (total <= 0.0) return std::nullopt;
    double x = rng.next_double() * total;
    for (int i = 0; i < 6; ++i) {
        if (!elig[i]) continue;
        if (x < weights[i]) return static_cast<MutationOp>(i);
        x -= weights[i];
    }
    for (int i = 5; i >= 0; --i) {
        if (elig[i]) return static_cast<MutationOp>(i);
    }
    return std::nullopt;
}

void comb_delete_in_place(std::vector<mrspace::CmbMR>& members, SeededRng& rng) {
    std::vector<std::size_t> multi;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (members[i].parts.size() >= 2) multi.push_back(i);
    }
    std::size_t idx = multi[rng.below(multi.size())];
    const auto& parts = members[idx].parts;
    std::size_t bond = 1 + rng.below(parts.size() - 1);
    mrspace::CmbMR left{{parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(bond)}};
    mrspace::CmbMR right{{parts.begin() + static_cast<std::ptrdiff_t>(bond), parts.end()}};
    members[idx] = std::move(left);
    members.insert(members.begin() + static_cast<std::ptrdiff_t>(idx) + 1, std::move(right));
}

void comb_add_in_place(std::vector<mrspace::CmbMR>& members,
                       const std::vector<mrspace::SingleMR>& set_mr, const SearchConfig& config,
                       SeededRng& rng) {
    std::vector<std::size_t> shallow;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (static_cast<int>(members[i].parts.size()) < config.max_combo_depth)
            shallow.push_back(i);
    }
    if (shallow.empty()) return;
    std::size_t idx = shallow[rng.below(shallow.size())];
    members[idx].parts.push_back(set_mr[rng.below(set_mr.size())]);
}

}  // namespace

mrspace::MRGroup mutate(const mrspace::MRGroup& g, const std::vector<mrspace::SingleMR>& set_mr,
                        const SearchConfig& config, SeededRng& rng,
                        std::optional<MutationOp>* applied) {
    if (applied) *applied = std::nullopt;
    if (!rng.bernoulli(config.mutation_rate)) return g;
    auto elig = eligible_ops(g, config);
    auto op = draw_operator(elig, config.mutation_op_weights, rng);
    if (!op) return g;
    if (applied) *applied = op;

    std::vector<mrspace::CmbMR> members = g.members;
    switch (*op) {
        case MutationOp::mr_add:
            members.push_back(random_cmb_mr(set_mr, config, rng));
            break;
        case MutationOp::mr_delete:
            members.erase(members.begin() + static_cast<std::ptrdiff_t>(rng.below(members.size())));
            break;
        case MutationOp::mr_replace:
            members[rng.below(members.size())] = random_cmb_mr(set_mr, config, rng);
            break;
        case MutationOp::comb_add:
            comb_add_in_place(members, set_mr, config, rng);
            break;
        case MutationOp::comb_delete:
            comb_delete_in_place(members, rng);
            break;
        case MutationOp::comb_replace:
            comb_delete_in_place(members, rng);
            comb_add_in_place(members, set_mr, config, rng);
            break;
    }
    return mrspace::MRGroup::make(std::move(members));
}

bool check_termination(const std::vector<double>& best_history, const SearchConfig& config) {
    int effective_max = std::min(config.max_iterations, SearchConfig::hard_iteration_cap);
    if (static_cast<int>(best_history.size()) >= effective_max) return true;
    int run = 0;
    for (std::size_t i = best_history.size(); i >= 2; --i) {
        if (std::abs(best_history[i - 1] - best_history[i - 2]) < config.fitness_delta_threshold)
            ++run;
        else
            break;
        if (run >= config.patience) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// run loops
// ---------------------------------------------------------------------------

namespace {

std::vector<Individual> initial_population(Problem& problem, const SearchConfig& config,
                                           SeededRng& rng, int n) {
    auto bounds = config.bounds();
    std::vector<Individual> pop;
    pop.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto g = mrspace::comb_gen(problem.set_mr(), bounds, rng);
        auto outcome = problem.evaluate(g, 0);
        pop.push_back({std::move(g), outcome});
    }
    return pop;
}

GenerationStats make_stats(int gen, const std::vector<Individual>& evaluated,
                           const Archive& archive) {
    GenerationStats s;
    s.generation = gen;
    const auto& best = archive.best();
    s.best_fitness_single = best.outcome.fitness_single;
    s.best_f1 = best.outcome.fitness1;
    s.best_f2 = best.outcome.fitness2;
    double f1 = 0.0, f2 = 0.0;
    for (const auto& ind : evaluated) {
        f1 += ind.outcome.fitness1;
        f2 += ind.outcome.fitness2;
    }
    if (!evaluated.empty()) {
        f1 /= static_cast<double>(evaluated.size());
        f2 /= static_cast<double>(evaluated.size());
    }
    s.mean_f1 = f1;
    s.mean_f2 = f2;
    s.archive_points = archive.objective_points();
    return s;
}

void emit(const Observer& obs, const GenerationStats& stats, std::vector<GenerationStats>& hist) {
    hist.push_back(stats);
    if (obs) obs(stats);
}

// Variation shared by single-GA / NSGA-II / SPEA2: fills `out` with n
// offspring bred from `pool` using the given tournament comparator.
std::vector<Individual> breed(Problem& problem, const std::vector<Individual>& pool,
                              const Comparator& cmp, const SearchConfig& config, SeededRng& rng,
                              int generation, int n) {
    std::vector<Individual> offspring;
    offspring.reserve(static_cast<std::size_t>(n));
    while (static_cast<int>(offspring.size()) < n) {
        const Individual& pa = tournament_select(pool, cmp, rng);
        const Individual& pb = tournament_select(pool, cmp, rng);
        mrspace::MRGroup c1 = pa.group;
        mrspace::MRGroup c2 = pb.group;
        if (rng.bernoulli(config.crossover_rate)) {
            auto [x1, x2] = crossover(pa.group, pb.group, problem.set_mr(), config, rng);
            c1 = std::move(x1);
            c2 = std::move(x2);
        }
        for (auto* child : {&c1, &c2}) {
            if (static_cast<int>(offspring.size()) >= n) break;
            auto mutated = mutate(*child, problem.set_mr(), config, rng);
            auto outcome = problem.evaluate(mutated, generation);
            offspring.push_back({std::move(mutated), outcome});
        }
    }
    return offspring;
}

struct RankedIndividual {
    int rank = 0;
    double crowding = 0.0;
};

// Fast non-dominated sort; returns fronts of indices and fills ranks.
std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Individual>& pop,
                                                        std::vector<int>& rank) {
    const std::size_t n = pop.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<int> dom_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(pop[p].outcome, pop[q].outcome))
                dominated[p].push_back(q);
            else if (dominates(pop[q].outcome, pop[p].outcome))
                ++dom_count[p];
        }
        if (dom_count[p] == 0) {
            rank[p] = 0;
            current.push_back(p);
        }
    }
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (std::size_t p : current) {
            for (std::size_t q : dominated[p]) {
                if (--dom_count[q] == 0) {
                    rank[q] = static_cast<int>(fronts.size());
                    next.push_back(q);
                }
            }
        }
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<Individual>& pop,
                                      const std::vector<std::size_t>& front) {
    std::vector<double> dist(pop.size(), 0.0);
    const std::size_t n = front.size();
    if (n == 0) return dist;
    if (n <= 2) {
        for (std::size_t i : front) dist[i] = std::numeric_limits<double>::infinity();
        return dist;
    }
    for (int obj = 0; obj < 2; ++obj) {
        auto value = [&](std::size_t i) {
            return obj == 0 ? pop[i].outcome.fitness1 : pop[i].outcome.fitness2;
        };
        std::vector<std::size_t> order(front);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (value(a) != value(b)) return value(a) < value(b);
            return a < b;
        });
        dist[order.front()] = std::numeric_limits<double>::infinity();
        dist[order.back()] = std::numeric_limits<double>::infinity();
        double span = value(order.back()) - value(order.front());
        if (span <= 0.0) continue;
        for (std::size_t k = 1; k + 1 < order.size(); ++k) {
            dist[order[k]] += (value(order[k + 1]) - value(order[k - 1])) / span;
        }
    }
    return dist;
}

double euclidean(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    double dx = a[0] - b[0];
    double dy = a[1] - b[1];
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

RunResult run_single_ga(Problem& problem, const SearchConfig& config, const Observer& obs) {
    config.validate();
    SeededRng rng(config.seed);
    Archive archive(ArchiveKind::elite, static_cast<std::size_t>(config.elite_capacity));
    RunResult result{std::move(archive), {}, 0, 0};

    auto pop = initial_population(problem, config, rng, config.population_size);
    for (const auto& ind : pop) result.archive.offer(ind.group, ind.outcome);
    std::vector<double> best_history{result.archive.best().outcome.fitness_single};
    emit(obs, make_stats(0, pop, result.archive), result.history);

    auto cmp = single_objective_comparator(config.weights);
    int gen = 1;
    while (!check_termination(best_history, config)) {
        auto offspring = breed(problem, pop, cmp, config, rng, gen, config.population_size);
        pop = std::move(offspring);
        for (const auto& ind : pop) result.archive.offer(ind.group, ind.outcome);
        best_history.push_back(result.archive.best().outcome.fitness_single);
        emit(obs, make_stats(gen, pop, result.archive), result.history);
        ++gen;
    }
    result.generations = gen;
    result.evaluations = problem.evaluations();
    return result;
}

RunResult run_nsga2(Problem& problem, const SearchConfig& config, const Observer& obs) {
    config.validate();
    SeededRng rng(config.seed);
    Archive archive(ArchiveKind::pareto);
    RunResult result{std::move(archive), {}, 0, 0};

    auto pop = initial_population(problem, config, rng, config.population_size);
    for (const auto& ind : pop) result.archive.offer(ind.group, ind.outcome);
    std::vector<double> best_history{result.archive.best().outcome.fitness_single};
    emit(obs, make_stats(0, pop, result.archive), result.history);

    std::vector<int> rank(pop.size(), 0);
    auto fronts = nondominated_sort(pop, rank);
    std::vector<double> crowd(pop.size(), 0.0);
    for (const auto& front : fronts) {
        auto d = crowding_distance(pop, front);
        for (std::size_t i : front) crowd[i] = d[i];
    }

    int gen = 1;
    while (!check_termination(best_history, config)) {
        // Tournament on (rank, crowding) requires index lookup; capture via
        // pointer identity into the current population.
        auto cmp = [&](const Individual& a, const Individual& b) {
            auto idx = [&](const Individual& x) {
                return static_cast<std::size_t>(&x - pop.data());
            };
            std::size_t ia = idx(a), ib = idx(b);
            if (rank[ia] != rank[ib]) return rank[ia] < rank[ib] ? -1 : 1;
            if (crowd[ia] != crowd[ib]) return crowd[ia] > crowd[ib] ? -1 : 1;
            return 0;
        };
        auto offspring =
            breed(problem, pop, cmp, config, rng, gen, config.population_size);
        for (const auto& ind : offspring) result.archive.offer(ind.group, ind.outcome);

        std::vector<Individual> combined = pop;
        combined.insert(combined.end(), offspring.begin(), offspring.end());
        std::vector<int> c_rank(combined.size(), 0);
        auto c_fronts = nondominated_sort(combined, c_rank);
        std::vector<Individual> next;
        std::vector<int> next_rank;
        std::vector<double> next_crowd;
        for (const auto& front : c_fronts) {
            auto d = crowding_distance(combined, front);
            if (next.size() + front.size() <= static_cast<std::size_t>(config.population_size)) {
                for (std::size_t i : front) {
                    next.push_back(combined[i]);
                    next_rank.push_back(c_rank[i]);
                    next_crowd.push_back(d[i]);
                }
            } else {
                std::vector<std::size_t> order(front);
                std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                    if (d[a] != d[b]) return d[a] > d[b];
                    return a < b;
                });
                for (std::size_t i : order) {
                    if (next.size() == static_cast<std::size_t>(config.population_size)) break;
                    next.push_back(combined[i]);
                    next_rank.push_back(c_rank[i]);
                    next_crowd.push_back(d[i]);
                }
            }
            if (next.size() == static_cast<std::size_t>(config.population_size)) break;
        }
        pop = std::move(next);
        rank = std::move(next_rank);
        crowd = std::move(next_crowd);

        best_history.push_back(result.archive.best().outcome.fitness_single);
        emit(obs, make_stats(gen, offspring, result.archive), result.history);
        ++gen;
    }
    result.generations = gen;
    result.evaluations = problem.evaluations();
    return result;
}

namespace {

// SPEA2 fitness: strength-based raw fitness plus k-NN density.
std::vector<double> spea2_fitness(const std::vector<Individual>& pool) {
    const std::size_t n = pool.size();
    std::vector<int> strength(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && dominates(pool[i].outcome, pool[j].outcome)) ++strength[i];
        }
    }
    std::vector<double> fit(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double raw = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && dominates(pool[j].outcome, pool[i].outcome)) raw += strength[j];
        }
        fit[i] = raw;
    }
    const std::size_t k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> dist;
        dist.reserve(n - 1);
        std::array<double, 2> pi{pool[i].outcome.fitness1, pool[i].outcome.fitness2};
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            dist.push_back(euclidean(
                pi, {pool[j].outcome.fitness1, pool[j].outcome.fitness2}));
        }
        std::sort(dist.begin(), dist.end());
        double sigma = dist.empty() ? 0.0 : dist[std::min(k, dist.size() - 1)];
        fit[i] += 1.0 / (sigma + 2.0);
    }
    return fit;
}

// Environmental truncation: repeatedly drop the point with the
// lexicographically smallest sorted-distance vector.
void spea2_truncate(std::vector<Individual>& archive, std::size_t capacity) {
    while (archive.size() > capacity) {
        const std::size_t n = archive.size();
        std::vector<std::vector<double>> dist(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::array<double, 2> pi{archive[i].outcome.fitness1, archive[i].outcome.fitness2};
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                dist[i].push_back(euclidean(
                    pi, {archive[j].outcome.fitness1, archive[j].outcome.fitness2}));
            }
            std::sort(dist[i].begin(), dist[i].end());
        }
        std::size_t victim = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (std::lexicographical_compare(dist[i].begin(), dist[i].end(),
                                             dist[victim].begin(), dist[victim].end()))
                victim = i;
        }
        archive.erase(archive.begin() + static_cast<std::ptrdiff_t>(victim));
    }
}

std::vector<Individual> spea2_environment(std::vector<Individual> pool, std::size_t capacity) {
    auto fit = spea2_fitness(pool);
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<Individual> next;
    std::vector<std::size_t> nondom;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (fit[i] < 1.0) nondom.push_back(i);
    }
    if (nondom.size() <= capacity) {
        for (std::size_t i : nondom) next.push_back(pool[i]);
        if (next.size() < capacity) {
            // fill with the best dominated individuals
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (fit[a] != fit[b]) return fit[a] < fit[b];
                return a < b;
            });
            for (std::size_t i : order) {
                if (next.size() == capacity) break;
                if (fit[i] < 1.0) continue;
                next.push_back(pool[i]);
            }
        }
    } else {
        for (std::size_t i : nondom) next.push_back(pool[i]);
        spea2_truncate(next, capacity);
    }
    return next;
}

}  // namespace

RunResult run_spea2(Problem& problem, const SearchConfig& config, const Observer& obs) {
    config.validate();
    SeededRng rng(config.seed);
    Archive archive(ArchiveKind::pareto);
    RunResult result{std::move(archive), {}, 0, 0};

    auto pop = initial_population(problem, config, rng, config.population_size);
    for (const auto& ind : pop) result.archive.offer(ind.group, ind.outcome);
    std::vector<double> best_history{result.archive.best().outcome.fitness_single};
    emit(obs, make_stats(0, pop, result.archive), result.history);

    auto env = spea2_environment(pop, static_cast<std::size_t>(config.population_size));

    int gen = 1;
    while (!check_termination(best_history, config)) {
        // Mating pool is the environmental archive ranked by SPEA2 fitness.
        auto env_fit = spea2_fitness(env);
        auto cmp = [&](const Individual& a, const Individual& b) {
            auto idx = [&](const Individual& x) {
                return static_cast<std::size_t>(&x - env.data());
            };
            double fa = env_fit[idx(a)];
            double fb = env_fit[idx(b)];
            if (fa != fb) return fa < fb ? -1 : 1;
            return 0;
        };
        auto offspring = breed(problem, env, cmp, config, rng, gen, config.population_size);
        for (const auto& ind : offspring) result.archive.offer(ind.group, ind.outcome);

        std::vector<Individual> pool = offspring;
        pool.insert(pool.end(), env.begin(), env.end());
        env = spea2_environment(std::move(pool), static_cast<std::size_t>(config.population_size));

        best_history.push_back(result.archive.best().outcome.fitness_single);
        emit(obs, make_stats(gen, offspring, result.archive), result.history);
        ++gen;
    }
    result.generations = gen;
    result.evaluations = problem.evaluations();
    return result;
}

RunResult run_moead(Problem& problem, const SearchConfig& config, const Observer& obs) {
    config.validate();
    SeededRng rng(config.seed);
    Archive archive(ArchiveKind::pareto);
    RunResult result{std::move(archive), {}, 0, 0};

    const int n = config.population_size;
    std::vector<std::array<double, 2>> lambda(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double t = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
        lambda[static_cast<std::size_t>(i)] = {t, 1.0 - t};
    }
    const std::size_t t_size = std::min<std::size_t>(static_cast<std::size_t>(config.moead_neighborhood),
                                                     static_cast<std::size_t>(n));
    std::vector<std::vector<std::size_t>> neighbors(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<std::size_t> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            double da = euclidean(lambda[static_cast<std::size_t>(i)], lambda[a]);
            double db = euclidean(lambda[static_cast<std::size_t>(i)], lambda[b]);
            if (da != db) return da < db;
            return a < b;
        });
        order.resize(t_size);
        neighbors[static_cast<std::size_t>(i)] = std::move(order);
    }

    auto pop = initial_population(problem, config, rng, n);
    for (const auto& ind : pop) result.archive.offer(ind.group, ind.outcome);
    std::array<double, 2> ideal{std::numeric_limits<double>::infinity(),
                                std::numeric_limits<double>::infinity()};
    for (const auto& ind : pop) {
        ideal[0] = std::min(ideal[0], ind.outcome.fitness1);
        ideal[1] = std::min(ideal[1], ind.outcome.fitness2);
    }
    auto tcheby = [&](const fitness::EvalOutcome& o, const std::array<double, 2>& l) {
        double g0 = std::max(l[0], 1e-6) * std::abs(o.fitness1 - ideal[0]);
        double g1 = std::max(l[1], 1e-6) * std::abs(o.fitness2 - ideal[1]);
        return std::max(g0, g1);
    };

    std::vector<double> best_history{result.archive.best().outcome.fitness_single};
    emit(obs, make_stats(0, pop, result.archive), result.history);

    int gen = 1;
    while (!check_termination(best_history, config)) {
        std::vector<Individual> children;
        children.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const auto& hood = neighbors[static_cast<std::size_t>(i)];
            std::size_t a = hood[rng.below(hood.size())];
            std::size_t b = hood[rng.below(hood.size())];
            mrspace::MRGroup child = pop[a].group;
            if (rng.bernoulli(config.crossover_rate)) {
                auto [c1, c2] =
                    crossover(pop[a].group, pop[b].group, problem.set_mr(), config, rng);
                child = std::move(c1);
                (void)c2;
            }
            child = mutate(child, problem.set_mr(), config, rng);
            auto outcome = problem.evaluate(child, gen);
            ideal[0] = std::min(ideal[0], outcome.fitness1);
            ideal[1] = std::min(ideal[1], outcome.fitness2);

            std::vector<std::size_t> order(hood);
            rng.shuffle(order);
            int replaced = 0;
            for (std::size_t j : order) {
                if (replaced >= config.moead_replacement_limit) break;
                if (tcheby(outcome, lambda[j]) <= tcheby(pop[j].outcome, lambda[j])) {
                    pop[j] = {child, outcome};
                    ++replaced;
                }
            }
            result.archive.offer(child, outcome);
            children.push_back({std::move(child), outcome});
        }
        best_history.push_back(result.archive.best().outcome.fitness_single);
        emit(obs, make_stats(gen, children, result.archive), result.history);
        ++gen;
    }
    result.generations = gen;
    result.evaluations = problem.evaluations();
    return result;
}

RunResult run_random_search(Problem& problem, const SearchConfig& config, const Observer& obs) {
    config.validate();
    SeededRng rng(config.seed);
    Archive archive(ArchiveKind::elite, 1);
    RunResult result{std::move(archive), {}, 0, 0};
    auto bounds = config.bounds();

    auto metric = [&](const fitness::EvalOutcome& o) {
        return config.random_metric == RandomMetric::scalarized ? o.fitness_single : o.fitness1;
    };

    // First iteration evaluates a single fresh group; subsequent iterations
    // compare population_size fresh groups against the incumbent.
    auto first = mrspace::comb_gen(problem.set_mr(), bounds, rng);
    Individual best{first, problem.evaluate(first, 0)};
    result.archive.offer(best.group, best.outcome);
    std::vector<double> best_history{metric(best.outcome)};
    emit(obs, make_stats(0, {best}, result.archive), result.history);

    const int effective_max = std::min(config.max_iterations, SearchConfig::hard_iteration_cap);
    for (int gen = 1; gen < effective_max; ++gen) {
        std::vector<Individual> batch;
        batch.reserve(static_cast<std::size_t>(config.population_size));
        for (int i = 0; i < config.population_size; ++i) {
            auto g = mrspace::comb_gen(problem.set_mr(), bounds, rng);
            auto outcome = problem.evaluate(g, gen);
            if (metric(outcome) < metric(best.outcome)) {
                best = {g, outcome};
                // Reset rather than offer: under effectiveness_only the
                // incumbent may scalarize lower yet still lose.
                result.archive = Archive(ArchiveKind::elite, 1);
                result.archive.offer(g, outcome);
            }
            batch.push_back({std::move(g), outcome});
        }
        best_history.push_back(metric(best.outcome));
        emit(obs, make_stats(gen, batch, result.archive), result.history);
    }
    result.generations = effective_max;
    result.evaluations = problem.evaluations();
    return result;
}

RunResult run_algorithm(Algorithm algorithm, Problem& problem, const SearchConfig& config,
                        const Observer& obs) {
    switch (algorithm) {
        case Algorithm::single_ga: return run_single_ga(problem, config, obs);
        case Algorithm::nsga2: return run_nsga2(problem, config, obs);
        case Algorithm::spea2: return run_spea2(problem, config, obs);
        case Algorithm::moead: return run_moead(problem, config, obs);
        case Algorithm::random_search: return run_random_search(problem, config, obs);
    }
    throw ConfigError("unhandled algorithm");
}

}  // namespace mrforge::search
