#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mrforge/cache.hpp"
#include "mrforge/embedding.hpp"
#include "mrforge/executor.hpp"
#include "mrforge/mrspace.hpp"

namespace mrforge::fitness {

struct Weights {
    double w1 = 0.5;
    double w2 = 0.5;
};

/// Per-group fitness record. fitness1 = 1 - context_asr exactly; fitness2
/// is the min-max normalized token cost; fitness_single is the weighted
/// scalarization.
struct EvalOutcome {
    double context_asr = 0.0;
    double mean_asr = 0.0;
    double mean_pq = 0.0;
    std::uint64_t c_token = 0;
    double fitness1 = 1.0;
    double fitness2 = 0.0;
    double fitness_single = 0.0;
    std::size_t failed_pairs = 0;

    friend bool operator==(const EvalOutcome&, const EvalOutcome&) = default;
};

struct InputText {
    std::string input_id;
    std::string text;
};

/// One row of the per-evaluation trace CSV.
struct TraceRow {
    std::string group_id;
    std::string cmb_mr_id;
    std::string input_id;
    bool satisfied = false;
    double pq = 0.0;
    std::size_t input_tokens = 0;
    std::size_t output_tokens = 0;
};

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);

/// Fraction of unsatisfied flags. Throws EmptyEvaluationError on empty
/// input.
double asr(const std::vector<bool>& satisfaction_flags);

/// Cosine similarity of the embedded texts clamped to [0, 1]; 0 when an
/// embedding degenerates to the zero vector.
double perturbation_quality(std::string_view original, std::string_view perturbed,
                            const EmbeddingProvider& embedder);

/// Min-max normalization of the token cost into [0, 1] using the task's
/// bounds.
double normalize_cost(std::uint64_t c_token, const executor::TaskSpec& task);

/// Derives default token bounds when a task does not configure them:
/// (0, group_max * inputs_per_iteration * per_exec_token_ceiling).
executor::TokenBounds derive_token_bounds(const executor::TaskSpec& task, int group_max,
                                          int inputs_per_iteration);

/// Resolves which satisfaction rule a CmbMR uses. Uniform part context
/// types win directly; mixed compositions are probed on embedded
/// calibration texts and classified preserving when the median
/// perturbation quality reaches sim_threshold.
perturb::ContextType effective_context_type(
    const mrspace::CmbMR& cmb, const EmbeddingProvider& embedder, double sim_threshold = 0.70,
    const perturb::Lexicon& lexicon = perturb::Lexicon::embedded());

/// Satisfaction of one (original output, perturbed output) pair under the
/// CmbMR's effective context type.
bool satisfaction(const mrspace::CmbMR& cmb, const std::string& original_out,
                  const std::string& perturbed_out, const executor::TaskSpec& task,
                  const EmbeddingProvider& embedder, double sim_threshold = 0.70);

bool satisfaction_with_context(perturb::ContextType effective, const std::string& original_out,
                               const std::string& perturbed_out, const executor::TaskSpec& task,
                               const EmbeddingProvider& embedder, double sim_threshold = 0.70);

struct EvaluatorOptions {
    std::string model_id = "surrogate";
    Weights weights;
    double sim_threshold = 0.70;
    int workers = 1;
};

/// Implements the cached effectiveness/cost loop: per (CmbMR, input) pair
/// the perturbed text, execution, satisfaction flag and quality value are
/// combined into eval_result = unsatisfied * pq; per-CmbMR results average
/// over inputs and Context_ASR averages over CmbMRs. Token cost sums the
/// perturbed executions once per pair plus the clean execution once per
/// input. All randomness derives from (cmb_id, input_id), so results are
/// independent of cache state and iteration order.
class GroupEvaluator {
public:
    GroupEvaluator(executor::TaskSpec task, executor::Executor& exec,
                   const EmbeddingProvider& embedder, executor::ExecutionCache& cache,
                   EvaluatorOptions options = {},
                   const perturb::Lexicon& lexicon = perturb::Lexicon::embedded());

    EvalOutcome evaluate(const mrspace::MRGroup& group, const std::vector<InputText>& inputs,
                         std::vector<TraceRow>* trace = nullptr);

    const executor::TaskSpec& task() const { return task_; }
    std::size_t executor_calls() const { return executor_calls_; }
    std::size_t cache_hits() const { return cache_hits_; }
    std::size_t warnings() const { return warnings_; }

private:
    struct PairResult {
        bool ok = false;
        bool satisfied = false;
        double pq = 0.0;
        std::uint64_t tokens = 0;
        std::size_t input_tokens = 0;
        std::size_t output_tokens = 0;
        bool executed = false;
        bool from_cache = false;
    };

    executor::CacheEntry resolve_original(const InputText& input);
    PairResult evaluate_pair(const mrspace::CmbMR& cmb, const std::string& cid,
                             perturb::ContextType effective, const InputText& input,
                             const std::string& original_out);
    perturb::ContextType context_for(const mrspace::CmbMR& cmb, const std::string& cid);

    executor::TaskSpec task_;
    executor::Executor& executor_;
    const EmbeddingProvider& embedder_;
    executor::ExecutionCache& cache_;
    EvaluatorOptions options_;
    const perturb::Lexicon& lexicon_;
    std::unordered_map<std::string, perturb::ContextType> context_cache_;
    std::size_t executor_calls_ = 0;
    std::size_t cache_hits_ = 0;
    std::size_t warnings_ = 0;
};

/// Free-function form of the evaluation entry point.
EvalOutcome evaluate_group(const mrspace::MRGroup& group, const std::vector<InputText>& inputs,
                           const executor::TaskSpec& task, executor::Executor& exec,
                           const EmbeddingProvider& embedder, executor::ExecutionCache& cache,
                           const EvaluatorOptions& options = {});

}  // namespace mrforge::fitness
