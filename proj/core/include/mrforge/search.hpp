#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrforge/fitness.hpp"
#include "mrforge/mrspace.hpp"
#include "mrforge/rng.hpp"

namespace mrforge::search {

enum class Algorithm { single_ga, nsga2, spea2, moead, random_search };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);

enum class RandomMetric { effectiveness_only, scalarized };

/// Knobs of the search process. Field names double as config-file keys.
struct SearchConfig {
    int population_size = 100;
    double crossover_rate = 0.6;
    double mutation_rate = 0.3;
    std::array<double, 6> mutation_op_weights = {1.0 / 6, 1.0 / 6, 1.0 / 6,
                                                 1.0 / 6, 1.0 / 6, 1.0 / 6};
    int max_iterations = 1200;
    static constexpr int hard_iteration_cap = 2000;
    double fitness_delta_threshold = 1e-4;
    int patience = 50;
    int group_min = 3;
    int group_max = 30;
    int max_combo_depth = 4;
    double and_probability = 0.5;
    fitness::Weights weights;
    int inputs_per_iteration = 50;
    std::uint64_t seed = 0;
    double sim_threshold = 0.70;
    std::vector<int> set_mr_intensities = {1, 2, 3, 4};
    int moead_neighborhood = 20;
    int moead_replacement_limit = 2;
    RandomMetric random_metric = RandomMetric::scalarized;
    int elite_capacity = 10;
    int workers = 1;

    void validate() const;  // throws ConfigError
    mrspace::GroupBounds bounds() const {
        return {group_min, group_max, max_combo_depth, and_probability};
    }
};

nlohmann::ordered_json config_to_json(const SearchConfig& c);
SearchConfig config_from_json(const nlohmann::json& j);

/// Evaluation backend seen by the algorithms. Implementations draw the
/// per-generation input sample; `generation` indexes it so all algorithms
/// under one master seed see identical input sequences.
class Problem {
public:
    virtual ~Problem() = default;
    virtual fitness::EvalOutcome evaluate(const mrspace::MRGroup& group, int generation) = 0;
    virtual const std::vector<mrspace::SingleMR>& set_mr() const = 0;
    virtual std::size_t evaluations() const = 0;
};

struct ArchiveEntry {
    mrspace::MRGroup group;
    fitness::EvalOutcome outcome;
};

enum class ArchiveKind { elite, pareto };

/// a dominates b on (fitness1, fitness2), both minimized.
bool dominates(const fitness::EvalOutcome& a, const fitness::EvalOutcome& b);

/// Solution store. Elite keeps the best fitness_single entries sorted
/// ascending (bounded by capacity); pareto keeps the mutually non-dominated
/// set of everything offered, so dominated coverage never shrinks.
class Archive {
public:
    explicit Archive(ArchiveKind kind, std::optional<std::size_t> capacity = std::nullopt);

    void offer(const mrspace::MRGroup& group, const fitness::EvalOutcome& outcome);

    ArchiveKind kind() const { return kind_; }
    const std::vector<ArchiveEntry>& entries() const { return entries_; }
    const ArchiveEntry& best() const;  // lowest fitness_single
    std::vector<std::array<double, 2>> objective_points() const;

private:
    ArchiveKind kind_;
    std::optional<std::size_t> capacity_;
    std::vector<ArchiveEntry> entries_;
};

struct Individual {
    mrspace::MRGroup group;
    fitness::EvalOutcome outcome;
};

/// Three-way comparison used by tournaments: negative when a is better.
using Comparator = std::function<int(const Individual&, const Individual&)>;

Comparator single_objective_comparator(const fitness::Weights& weights);
Comparator dominance_comparator();

/// Binary tournament: draws two uniformly, compares, breaks ties by lower
/// c_token and then by coin flip. Throws EmptyPopulationError.
const Individual& tournament_select(const std::vector<Individual>& population,
                                    const Comparator& better, SeededRng& rng);

/// One-point crossover with independent cut points and repair to size
/// bounds. Pre-repair the children partition the parents' members.
std::pair<mrspace::MRGroup, mrspace::MRGroup> crossover(const mrspace::MRGroup& p1,
                                                        const mrspace::MRGroup& p2,
                                                        const std::vector<mrspace::SingleMR>& set_mr,
                                                        const SearchConfig& config,
                                                        SeededRng& rng);

enum class MutationOp : int {
    mr_add = 0,
    mr_delete = 1,
    mr_replace = 2,
    comb_add = 3,
    comb_delete = 4,
    comb_replace = 5,
};

/// Operators eligible on this group under the configured bounds.
std::array<bool, 6> eligible_ops(const mrspace::MRGroup& g, const SearchConfig& config);

/// With probability mutation_rate applies exactly one operator drawn by
/// mutation_op_weights among the eligible ones. `applied` reports the
/// chosen operator.
mrspace::MRGroup mutate(const mrspace::MRGroup& g, const std::vector<mrspace::SingleMR>& set_mr,
                        const SearchConfig& config, SeededRng& rng,
                        std::optional<MutationOp>* applied = nullptr);

/// Fresh CmbMR with uniform depth in [1, max_combo_depth] and uniform parts.
mrspace::CmbMR random_cmb_mr(const std::vector<mrspace::SingleMR>& set_mr,
                             const SearchConfig& config, SeededRng& rng);

/// True when max_iterations is reached or the trailing best-fitness deltas
/// stayed below fitness_delta_threshold for `patience` generations.
bool check_termination(const std::vector<double>& best_history, const SearchConfig& config);

struct GenerationStats {
    int generation = 0;
    double best_fitness_single = 0.0;
    double best_f1 = 0.0;
    double best_f2 = 0.0;
    double mean_f1 = 0.0;
    double mean_f2 = 0.0;
    std::vector<std::array<double, 2>> archive_points;
};

using Observer = std::function<void(const GenerationStats&)>;

struct RunResult {
    Archive archive;
    std::vector<GenerationStats> history;
    int generations = 0;
    std::size_t evaluations = 0;
};

RunResult run_single_ga(Problem& problem, const SearchConfig& config, const Observer& obs = {});
RunResult run_nsga2(Problem& problem, const SearchConfig& config, const Observer& obs = {});
RunResult run_spea2(Problem& problem, const SearchConfig& config, const Observer& obs = {});
RunResult run_moead(Problem& problem, const SearchConfig& config, const Observer& obs = {});
RunResult run_random_search(Problem& problem, const SearchConfig& config,
                            const Observer& obs = {});

RunResult run_algorithm(Algorithm algorithm, Problem& problem, const SearchConfig& config,
                        const Observer& obs = {});

}  // namespace mrforge::search
