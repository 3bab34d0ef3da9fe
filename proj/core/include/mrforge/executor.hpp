#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrforge/tokens.hpp"

namespace mrforge::executor {

enum class TaskKind { classification, generation };

struct TokenBounds {
    double min_tokens = 0.0;
    double max_tokens = 0.0;
    bool valid() const { return min_tokens < max_tokens; }
};

/// A Text-to-Text task: the instruction prompt plus, for classification,
/// the closed label set. token_bounds drive cost normalization and may be
/// left invalid to be derived from the search configuration.
struct TaskSpec {
    std::string task_id;
    TaskKind kind = TaskKind::classification;
    std::string instruction;
    std::vector<std::string> label_set;
    TokenBounds token_bounds;
    int per_exec_token_ceiling = 128;
};

/// Built-in tasks: "sa" (sentiment classification) and "ts" (summarization).
const std::vector<TaskSpec>& builtin_tasks();
TaskSpec task_by_id(std::string_view task_id);

/// Token accounting for one LLM execution. input_tokens covers instruction
/// plus input text; output_tokens covers the produced text.
struct ExecRecord {
    std::size_t input_tokens = 0;
    std::size_t output_tokens = 0;
    std::string output_text;

    friend bool operator==(const ExecRecord&, const ExecRecord&) = default;
};

/// Effective relation direction of the perturbation that produced the
/// input, as resolved by the fitness layer. `none` marks clean executions.
enum class EffectiveContext { none, preserving, altering };

/// Identity of the (CmbMR, input) pair behind an execution. The surrogate
/// keys its deterministic vulnerability draws on it; remote executors
/// ignore it. Clean executions use cmb_id = "IDENTITY" and no parts.
struct ExecContext {
    std::string input_id;
    std::string cmb_id;
    std::vector<std::string> part_ids;
    EffectiveContext context = EffectiveContext::none;
};

inline const char* kIdentityCmbId = "IDENTITY";

class Executor {
public:
    virtual ~Executor() = default;

    /// Runs the model on (instruction, input). Output is deterministic in
    /// (model_id, task, input, ctx) for surrogate implementations.
    virtual ExecRecord execute(const std::string& model_id, const std::string& input,
                               const TaskSpec& task, const ExecContext& ctx = {}) = 0;
};

/// Planted ground truth for offline experiments: per-perturbation failure
/// probabilities. A CmbMR's failure chance combines its parts
/// independently: 1 - prod(1 - p_i).
struct VulnerabilityProfile {
    std::map<std::string, double> flip;        // classification
    std::map<std::string, double> corruption;  // generation
    double default_flip = 0.0;
    double default_corruption = 0.0;

    double flip_probability(const std::vector<std::string>& part_ids) const;
    double corruption_probability(const std::vector<std::string>& part_ids) const;
};

/// Deterministic stand-in model. Classification picks a stable base label
/// per (model, task, input) and deviates only on profile-driven draws;
/// generation emits an extractive summary, replaced by divergent output
/// when the relation should alter or the profile corrupts the run.
class SurrogateExecutor : public Executor {
public:
    SurrogateExecutor() = default;
    explicit SurrogateExecutor(VulnerabilityProfile profile) : profile_(std::move(profile)) {}

    ExecRecord execute(const std::string& model_id, const std::string& input,
                       const TaskSpec& task, const ExecContext& ctx = {}) override;

    const VulnerabilityProfile& profile() const { return profile_; }

private:
    VulnerabilityProfile profile_;
};

struct RemoteOptions {
    std::string endpoint;  // e.g. http://host:port/v1/execute
    std::string api_key;
    double timeout_s = 30.0;
    int max_attempts = 3;
    double backoff_initial_s = 1.0;

    /// Reads MRFORGE_ENDPOINT / MRFORGE_API_KEY.
    static RemoteOptions from_env();
};

/// HTTP executor: POST {"model","instruction","input"} -> {"output"}.
/// Retries with exponential backoff, then throws ExecutorUnavailableError.
class RemoteExecutor : public Executor {
public:
    explicit RemoteExecutor(RemoteOptions options);

    ExecRecord execute(const std::string& model_id, const std::string& input,
                       const TaskSpec& task, const ExecContext& ctx = {}) override;

    /// Test hook: disables the inter-attempt sleep.
    void set_backoff_enabled(bool enabled) { backoff_enabled_ = enabled; }

private:
    RemoteOptions options_;
    std::string host_;
    std::string path_;
    bool backoff_enabled_ = true;
};

}  // namespace mrforge::executor
