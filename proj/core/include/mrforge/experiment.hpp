#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrforge/cache.hpp"
#include "mrforge/corpus.hpp"
#include "mrforge/executor.hpp"
#include "mrforge/fitness.hpp"
#include "mrforge/search.hpp"

namespace mrforge::cli {

/// Process-wide default embedder (hashed trigrams, dim 512).
const fitness::EmbeddingProvider& default_embedder();

/// search::Problem over a corpus: each generation evaluates on
/// inputs_per_iteration texts sampled without replacement from the corpus
/// with a generation-indexed sub-seed, so every algorithm sees the same
/// input sequence for a given input_seed.
class CorpusProblem : public search::Problem {
public:
    CorpusProblem(std::vector<fitness::InputText> corpus, std::vector<mrspace::SingleMR> set_mr,
                  fitness::GroupEvaluator& evaluator, int inputs_per_iteration,
                  std::uint64_t input_seed);

    fitness::EvalOutcome evaluate(const mrspace::MRGroup& group, int generation) override;
    const std::vector<mrspace::SingleMR>& set_mr() const override { return set_mr_; }
    std::size_t evaluations() const override { return evaluations_; }

    const std::vector<fitness::InputText>& inputs_for(int generation);

private:
    std::vector<fitness::InputText> corpus_;
    std::vector<mrspace::SingleMR> set_mr_;
    fitness::GroupEvaluator& evaluator_;
    int inputs_per_iteration_;
    std::uint64_t input_seed_;
    std::map<int, std::vector<fitness::InputText>> sample_cache_;
    std::size_t evaluations_ = 0;
};

/// Everything one `run` invocation needs. Field names double as config keys.
struct ExperimentPlan {
    std::vector<search::Algorithm> algorithms = {
        search::Algorithm::single_ga, search::Algorithm::nsga2, search::Algorithm::spea2,
        search::Algorithm::moead, search::Algorithm::random_search};
    int repetitions = 1;
    std::vector<std::string> tasks = {"sa"};
    std::string model_id = "surrogate-v1";
    std::string executor_kind = "surrogate";  // or "remote"
    executor::VulnerabilityProfile profile;
    executor::RemoteOptions remote;
    search::SearchConfig search;
    std::filesystem::path corpus_path;
    std::filesystem::path cache_path;  // empty -> in-memory cache
    std::filesystem::path output_dir = "out";
    bool emit_trace = false;

    void validate() const;  // throws ConfigError / CorpusError
};

nlohmann::ordered_json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const nlohmann::json& j);
ExperimentPlan load_plan(const std::filesystem::path& config_path);

/// Deterministic repetition seed: adding algorithms or reps never changes
/// existing sub-seeds.
std::uint64_t repetition_seed(std::uint64_t master_seed, search::Algorithm algorithm,
                              int repetition);

struct RunSummary {
    int executed = 0;
    int skipped = 0;
    std::vector<std::filesystem::path> manifests;
};

/// Executes every (task x algorithm x repetition) cell, writing
/// <task>_<algorithm>_rep<k>_{manifest,archive}.json plus a volatile
/// _stats.json sidecar. Cells whose manifest already exists are skipped.
RunSummary cmd_run(const ExperimentPlan& plan);

struct CompareSummary {
    std::string task_id;
    std::string model_id;
    double alpha = 0.05;
    std::vector<std::filesystem::path> reports;
};

/// Reads manifests from the given run directories and emits the KW / Dunn /
/// MWU / A12 / hypervolume tables and convergence series (CSV + JSON) into
/// out_dir. Runs must share task and model; alpha is Bonferroni-adjusted
/// over the pairwise comparison count.
CompareSummary cmd_compare(const std::vector<std::filesystem::path>& run_dirs,
                           const std::filesystem::path& out_dir);

corpus::CorpusSummary cmd_corpus_validate(const std::filesystem::path& path);

nlohmann::ordered_json cmd_cache_stats(const std::filesystem::path& cache_path);

nlohmann::ordered_json cmd_catalog_export();

nlohmann::ordered_json outcome_to_json(const fitness::EvalOutcome& outcome);
fitness::EvalOutcome outcome_from_json(const nlohmann::json& j);

}  // namespace mrforge::cli
