#include <algorithm>
#include <array>

#include "mrforge/errors.hpp"
#include "mrforge/executor.hpp"
#include "mrforge/rng.hpp"
#include "mrforge/text.hpp"

namespace mrforge::executor {

const std::vector<TaskSpec>& builtin_tasks() {
    static const std::vector<TaskSpec> tasks = {
        {"sa",
         TaskKind::classification,
         "Analyze the sentiment of the given text and answer with Positive or Negative.",
         {"Positive", "Negative"},
         {},
         128},
        {"ts",
         TaskKind::generation,
         "Summarize the given text in one short sentence.",
         {},
         {},
         128},
    };
    return tasks;
}

TaskSpec task_by_id(std::string_view task_id) {
    for (const auto& t : builtin_tasks()) {
        if (t.task_id == task_id) return t;
    }
    throw ConfigError("unknown task id: " + std::string(task_id));
}

namespace {

double combined_probability(const std::map<std::string, double>& table, double fallback,
                            const std::vector<std::string>& part_ids) {
    double keep = 1.0;
    for (const auto& id : part_ids) {
        auto it = table.find(id);
        double p = it != table.end() ? it->second : fallback;
        keep *= 1.0 - p;
    }
    return 1.0 - keep;
}

}  // namespace

double VulnerabilityProfile::flip_probability(const std::vector<std::string>& part_ids) const {
    return combined_probability(flip, default_flip, part_ids);
}

double VulnerabilityProfile::corruption_probability(
    const std::vector<std::string>& part_ids) const {
    return combined_probability(corruption, default_corruption, part_ids);
}

namespace {

constexpr std::array<std::string_view, 10> kPositiveWords = {
    "good", "great", "excellent", "love", "wonderful",
    "best", "nice", "happy",     "perfect", "recommend"};
constexpr std::array<std::string_view, 10> kNegativeWords = {
    "bad",  "terrible", "awful", "hate",  "poor",
    "worst", "broken",  "sad",   "nasty", "disappointed"};

std::string join_key(std::initializer_list<std::string_view> parts) {
    std::string key;
    for (auto p : parts) {
        key.append(p);
        key.push_back('\x1f');
    }
    return key;
}

// Stable per-input identity: the fitness layer supplies input_id so clean
// and perturbed runs of the same input share a base response.
std::string_view stable_key(const std::string& input, const ExecContext& ctx) {
    return ctx.input_id.empty() ? std::string_view(input) : std::string_view(ctx.input_id);
}

std::size_t keyword_count(const std::vector<std::string>& words,
                          const std::array<std::string_view, 10>& list) {
    std::size_t n = 0;
    for (const auto& w : words) {
        std::string core = text::lowercase_ascii(text::strip_punct(w));
        for (auto k : list) {
            if (core == k) {
                ++n;
                break;
            }
        }
    }
    return n;
}

std::size_t base_label_index(const std::string& model_id, const TaskSpec& task,
                             const std::string& input, const ExecContext& ctx) {
    const std::size_t n = task.label_set.size();
    if (!ctx.input_id.empty())
        return static_cast<std::size_t>(
            mix_u64(fnv1a64(join_key({model_id, task.task_id, ctx.input_id, "label"}))) % n);
    // Direct calls without a pair identity: a tiny keyword heuristic when
    // the labels look like sentiment, hash otherwise.
    bool sentimentish = false;
    std::size_t pos_idx = 0, neg_idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::string l = text::lowercase_ascii(task.label_set[i]);
        if (l == "positive") {
            pos_idx = i;
            sentimentish = true;
        }
        if (l == "negative") neg_idx = i;
    }
    if (sentimentish) {
        auto words = text::split_words(input);
        std::size_t pos = keyword_count(words, kPositiveWords);
        std::size_t neg = keyword_count(words, kNegativeWords);
        if (pos > neg) return pos_idx;
        if (neg > pos) return neg_idx;
    }
    return static_cast<std::size_t>(
        mix_u64(fnv1a64(join_key({model_id, task.task_id, input, "label"}))) % n);
}

std::size_t other_label_index(std::size_t base, std::size_t n, std::uint64_t h) {
    return (base + 1 + h % (n - 1)) % n;
}

std::string extractive_summary(const std::string& input) {
    auto words = text::split_words(input);
    std::vector<std::string> salient;
    for (const auto& w : words) {
        if (text::strip_punct(w).size() >= 4) salient.push_back(text::strip_punct(w));
        if (salient.size() == 12) break;
    }
    if (salient.empty()) {
        for (const auto& w : words) {
            salient.push_back(w);
            if (salient.size() == 12) break;
        }
    }
    return text::join(salient, " ");
}

// Deterministic pseudo-text far from any real summary in embedding space.
std::string gibberish(std::string_view key) {
    SeededRng rng(mix_u64(fnv1a64(key)));
    std::vector<std::string> words;
    for (int w = 0; w < 8; ++w) {
        std::size_t len = 5 + rng.below(4);
        std::string word;
        for (std::size_t i = 0; i < len; ++i)
            word.push_back(static_cast<char>('a' + rng.below(26)));
        words.push_back(std::move(word));
    }
    return text::join(words, " ");
}

}  // namespace

ExecRecord SurrogateExecutor::execute(const std::string& model_id, const std::string& input,
                                      const TaskSpec& task, const ExecContext& ctx) {
    std::string output;
    const bool perturbed = !ctx.part_ids.empty();
    const std::string_view key = stable_key(input, ctx);
    if (task.kind == TaskKind::classification) {
        if (task.label_set.empty())
            throw ConfigError("classification task without labels: " + task.task_id);
        std::size_t base = base_label_index(model_id, task, input, ctx);
        std::size_t idx = base;
        const std::size_t n = task.label_set.size();
        if (n > 1 && perturbed) {
            std::uint64_t h =
                mix_u64(fnv1a64(join_key({model_id, task.task_id, key, ctx.cmb_id, "alt"})));
            // A robust model keeps the label for preserving perturbations
            // and moves off it for altering ones; a profile draw inverts
            // whichever is expected.
            std::size_t expected = ctx.context == EffectiveContext::altering
                                       ? other_label_index(base, n, h)
                                       : base;
            double p = profile_.flip_probability(ctx.part_ids);
            bool flipped =
                hash_unit(join_key({model_id, task.task_id, key, ctx.cmb_id, "flip"})) < p;
            idx = flipped ? (expected == base ? other_label_index(base, n, h) : base) : expected;
        }
        output = task.label_set[idx];
    } else {
        std::string summary = extractive_summary(input);
        bool divergent = false;
        if (perturbed) {
            double p = profile_.corruption_probability(ctx.part_ids);
            bool corrupted =
                hash_unit(join_key({model_id, task.task_id, key, ctx.cmb_id, "corrupt"})) < p;
            bool expect_divergent = ctx.context == EffectiveContext::altering;
            divergent = corrupted ? !expect_divergent : expect_divergent;
        }
        output = divergent
                     ? gibberish(join_key({model_id, task.task_id, key, ctx.cmb_id, "gib"}))
                     : summary;
    }
    ExecRecord rec;
    rec.output_text = std::move(output);
    rec.input_tokens = count_tokens(task.instruction) + count_tokens(input);
    rec.output_tokens = count_tokens(rec.output_text);
    return rec;
}

}  // namespace mrforge::executor
