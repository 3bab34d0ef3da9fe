#include "mrforge/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "mrforge/errors.hpp"
#include "mrforge/rng.hpp"
#include "mrforge/text.hpp"

namespace mrforge::fitness {

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
    os << "group_id,cmb_mr_id,input_id,satisfied,pq,input_tokens,output_tokens\n";
    for (const auto& r : rows) {
        os << r.group_id << ',' << r.cmb_mr_id << ',' << r.input_id << ','
           << (r.satisfied ? 1 : 0) << ',' << r.pq << ',' << r.input_tokens << ','
           << r.output_tokens << '\n';
    }
}

double asr(const std::vector<bool>& satisfaction_flags) {
    if (satisfaction_flags.empty()) throw EmptyEvaluationError("asr: empty result list");
    std::size_t unsatisfied = 0;
    for (bool satisfied : satisfaction_flags) {
        if (!satisfied) ++unsatisfied;
    }
    return static_cast<double>(unsatisfied) / static_cast<double>(satisfaction_flags.size());
}

double perturbation_quality(std::string_view original, std::string_view perturbed,
                            const EmbeddingProvider& embedder) {
    double sim = cosine(embedder.embed(original), embedder.embed(perturbed));
    return std::clamp(sim, 0.0, 1.0);
}

double normalize_cost(std::uint64_t c_token, const executor::TaskSpec& task) {
    const auto& b = task.token_bounds;
    if (!b.valid()) throw ConfigError("normalize_cost: invalid token bounds for " + task.task_id);
    double x = (static_cast<double>(c_token) - b.min_tokens) / (b.max_tokens - b.min_tokens);
    return std::clamp(x, 0.0, 1.0);
}

executor::TokenBounds derive_token_bounds(const executor::TaskSpec& task, int group_max,
                                          int inputs_per_iteration) {
    executor::TokenBounds b;
    b.min_tokens = 0.0;
    b.max_tokens = static_cast<double>(group_max) * inputs_per_iteration *
                   task.per_exec_token_ceiling;
    return b;
}

namespace {

// Calibration probes for mixed-context compositions. Multi-sentence so
// sentence-level parts stay applicable.
const std::vector<std::string>& calibration_probes() {
    static const std::vector<std::string> probes = {
        "The delivery arrived on time. The packaging was intact. Overall a pleasant purchase "
        "experience for the whole family.",
        "Local councils announced new funding for road repairs. Residents welcomed the decision. "
        "Work is expected to begin next spring.",
        "The battery lasts a full day of heavy use. The screen is bright and sharp. I would "
        "happily buy this phone again.",
        "Markets closed higher after a volatile week of trading. Analysts pointed to strong "
        "earnings. Investors remain cautious about inflation.",
        "The recipe was easy to follow and quick to prepare. The result tasted wonderful. Even "
        "the children asked for a second serving.",
    };
    return probes;
}

bool uniform_context(const mrspace::CmbMR& cmb, perturb::ContextType* out) {
    bool first = true;
    perturb::ContextType ctx = perturb::ContextType::preserving;
    for (const auto& part : cmb.parts) {
        auto t = perturb::descriptor(part.perturbation_id).context_type;
        if (first) {
            ctx = t;
            first = false;
        } else if (t != ctx) {
            return false;
        }
    }
    *out = ctx;
    return true;
}

}  // namespace

perturb::ContextType effective_context_type(const mrspace::CmbMR& cmb,
                                            const EmbeddingProvider& embedder,
                                            double sim_threshold,
                                            const perturb::Lexicon& lexicon) {
    perturb::ContextType uniform;
    if (uniform_context(cmb, &uniform)) return uniform;

    const std::string cid = mrspace::cmb_id(cmb);
    std::vector<double> quality;
    const auto& probes = calibration_probes();
    for (std::size_t k = 0; k < probes.size(); ++k) {
        SeededRng rng(combine_seed(fnv1a64(cid), combine_seed(fnv1a64("__probe"), k)));
        try {
            std::string perturbed = mrspace::compose(cmb, probes[k], rng, lexicon);
            quality.push_back(perturbation_quality(probes[k], perturbed, embedder));
        } catch (const CompositionFailedError&) {
            // probe not applicable, skip
        }
    }
    if (quality.empty()) {
        // Fall back to the part types: any altering part makes the
        // composition altering.
        for (const auto& part : cmb.parts) {
            if (perturb::descriptor(part.perturbation_id).context_type ==
                perturb::ContextType::altering)
                return perturb::ContextType::altering;
        }
        return perturb::ContextType::preserving;
    }
    std::sort(quality.begin(), quality.end());
    std::size_t n = quality.size();
    double median = n % 2 == 1 ? quality[n / 2] : 0.5 * (quality[n / 2 - 1] + quality[n / 2]);
    return median >= sim_threshold ? perturb::ContextType::preserving
                                   : perturb::ContextType::altering;
}

bool satisfaction_with_context(perturb::ContextType effective, const std::string& original_out,
                               const std::string& perturbed_out, const executor::TaskSpec& task,
                               const EmbeddingProvider& embedder, double sim_threshold) {
    if (task.kind == executor::TaskKind::classification) {
        auto norm = [](const std::string& s) {
            std::string t = text::lowercase_ascii(s);
            std::size_t b = t.find_first_not_of(" \t\r\n");
            std::size_t e = t.find_last_not_of(" \t\r\n");
            if (b == std::string::npos) return std::string();
            return t.substr(b, e - b + 1);
        };
        bool equal = norm(original_out) == norm(perturbed_out);
        return effective == perturb::ContextType::preserving ? equal : !equal;
    }
    double sim = cosine(embedder.embed(original_out), embedder.embed(perturbed_out));
    bool similar = sim >= sim_threshold;
    return effective == perturb::ContextType::preserving ? similar : !similar;
}

bool satisfaction(const mrspace::CmbMR& cmb, const std::string& original_out,
                  const std::string& perturbed_out, const executor::TaskSpec& task,
                  const EmbeddingProvider& embedder, double sim_threshold) {
    auto effective = effective_context_type(cmb, embedder, sim_threshold);
    return satisfaction_with_context(effective, original_out, perturbed_out, task, embedder,
                                     sim_threshold);
}

GroupEvaluator::GroupEvaluator(executor::TaskSpec task, executor::Executor& exec,
                               const EmbeddingProvider& embedder,
                               executor::ExecutionCache& cache, EvaluatorOptions options,
                               const perturb::Lexicon& lexicon)
    : task_(std::move(task)),
      executor_(exec),
      embedder_(embedder),
      cache_(cache),
      options_(std::move(options)),
      lexicon_(lexicon) {
    if (!task_.token_bounds.valid()) task_.token_bounds = derive_token_bounds(task_, 30, 50);
}

perturb::ContextType GroupEvaluator::context_for(const mrspace::CmbMR& cmb,
                                                 const std::string& cid) {
    auto it = context_cache_.find(cid);
    if (it != context_cache_.end()) return it->second;
    auto ctx = effective_context_type(cmb, embedder_, options_.sim_threshold, lexicon_);
    context_cache_.emplace(cid, ctx);
    return ctx;
}

executor::CacheEntry GroupEvaluator::resolve_original(const InputText& input) {
    std::string key = executor::ExecutionCache::make_key(options_.model_id, task_.task_id,
                                                         executor::kIdentityCmbId,
                                                         input.input_id);
    if (auto hit = cache_.get(key)) {
        ++cache_hits_;
        return *hit;
    }
    executor::ExecContext ctx;
    ctx.input_id = input.input_id;
    ctx.cmb_id = executor::kIdentityCmbId;
    auto rec = executor_.execute(options_.model_id, input.text, task_, ctx);
    ++executor_calls_;
    executor::CacheEntry entry{key, rec.output_text, 0.0, rec};
    cache_.put(entry);
    return entry;
}

GroupEvaluator::PairResult GroupEvaluator::evaluate_pair(const mrspace::CmbMR& cmb,
                                                         const std::string& cid,
                                                         perturb::ContextType effective,
                                                         const InputText& input,
                                                         const std::string& original_out) {
    PairResult out;
    std::string perturbed_text;
    try {
        SeededRng rng(combine_seed(fnv1a64(cid), fnv1a64(input.input_id)));
        perturbed_text = mrspace::compose(cmb, input.text, rng, lexicon_);
    } catch (const CompositionFailedError&) {
        return out;  // pair excluded, reported as warning
    }

    std::string key = executor::ExecutionCache::make_key(options_.model_id, task_.task_id, cid,
                                                         input.input_id);
    executor::CacheEntry entry;
    if (auto hit = cache_.get(key)) {
        entry = *hit;
        out.from_cache = true;
    } else {
        executor::ExecContext ctx;
        ctx.input_id = input.input_id;
        ctx.cmb_id = cid;
        for (const auto& part : cmb.parts) ctx.part_ids.push_back(part.perturbation_id);
        ctx.context = effective == perturb::ContextType::preserving
                          ? executor::EffectiveContext::preserving
                          : executor::EffectiveContext::altering;
        executor::ExecRecord rec;
        try {
            rec = executor_.execute(options_.model_id, perturbed_text, task_, ctx);
        } catch (const ExecutorUnavailableError&) {
            return out;
        } catch (const MalformedResponseError&) {
            return out;
        }
        out.executed = true;
        entry = executor::CacheEntry{key, rec.output_text, 0.0, rec};
    }

    out.satisfied = satisfaction_with_context(effective, original_out, entry.output_text, task_,
                                              embedder_, options_.sim_threshold);
    out.pq = perturbation_quality(input.text, perturbed_text, embedder_);
    if (!out.from_cache) {
        entry.eval_result = (out.satisfied ? 0.0 : 1.0) * out.pq;
        cache_.put(entry);
    }
    out.input_tokens = entry.exec.input_tokens;
    out.output_tokens = entry.exec.output_tokens;
    out.tokens = entry.exec.input_tokens + entry.exec.output_tokens;
    out.ok = true;
    return out;
}

EvalOutcome GroupEvaluator::evaluate(const mrspace::MRGroup& group,
                                     const std::vector<InputText>& inputs,
                                     std::vector<TraceRow>* trace) {
    if (inputs.empty()) throw EmptyEvaluationError("evaluate_group: no inputs");
    if (group.members.empty()) throw EmptyEvaluationError("evaluate_group: empty group");

    EvalOutcome outcome;

    // Clean execution once per input per evaluation.
    std::vector<std::string> original_out(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        auto entry = resolve_original(inputs[i]);
        original_out[i] = entry.output_text;
        outcome.c_token += entry.exec.input_tokens + entry.exec.output_tokens;
    }

    const std::size_t n_members = group.members.size();
    std::vector<std::string> cids(n_members);
    std::vector<perturb::ContextType> contexts(n_members);
    for (std::size_t m = 0; m < n_members; ++m) {
        cids[m] = mrspace::cmb_id(group.members[m]);
        contexts[m] = context_for(group.members[m], cids[m]);
    }

    const std::size_t n_pairs = n_members * inputs.size();
    std::vector<PairResult> results(n_pairs);
    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            std::size_t m = p / inputs.size();
            std::size_t i = p % inputs.size();
            results[p] = evaluate_pair(group.members[m], cids[m], contexts[m], inputs[i],
                                       original_out[i]);
        }
    };
    int workers = std::max(1, options_.workers);
    if (workers == 1 || n_pairs < 2) {
        run_range(0, n_pairs);
    } else {
        std::vector<std::future<void>> futures;
        std::size_t chunk = (n_pairs + workers - 1) / static_cast<std::size_t>(workers);
        for (std::size_t begin = 0; begin < n_pairs; begin += chunk) {
            std::size_t end = std::min(n_pairs, begin + chunk);
            futures.push_back(std::async(std::launch::async, run_range, begin, end));
        }
        for (auto& f : futures) f.get();
    }

    double sum_eval = 0.0, sum_asr = 0.0, sum_pq = 0.0;
    std::size_t contributing_members = 0;
    for (std::size_t m = 0; m < n_members; ++m) {
        std::size_t n_ok = 0, unsat = 0;
        double pq_sum = 0.0, eval_sum = 0.0;
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            const PairResult& r = results[m * inputs.size() + i];
            if (r.executed) ++executor_calls_;
            if (r.from_cache) ++cache_hits_;
            if (!r.ok) {
                ++outcome.failed_pairs;
                ++warnings_;
                continue;
            }
            ++n_ok;
            if (!r.satisfied) ++unsat;
            pq_sum += r.pq;
            eval_sum += (r.satisfied ? 0.0 : 1.0) * r.pq;
            outcome.c_token += r.tokens;
            if (trace) {
                trace->push_back({group.id, cids[m], inputs[i].input_id, r.satisfied, r.pq,
                                  r.input_tokens, r.output_tokens});
            }
        }
        if (n_ok == 0) continue;
        ++contributing_members;
        sum_eval += eval_sum / static_cast<double>(n_ok);
        sum_asr += static_cast<double>(unsat) / static_cast<double>(n_ok);
        sum_pq += pq_sum / static_cast<double>(n_ok);
    }
    if (contributing_members == 0)
        throw EmptyEvaluationError("evaluate_group: every (CmbMR, input) pair failed");

    outcome.context_asr = sum_eval / static_cast<double>(contributing_members);
    outcome.mean_asr = sum_asr / static_cast<double>(contributing_members);
    outcome.mean_pq = sum_pq / static_cast<double>(contributing_members);
    outcome.fitness1 = 1.0 - outcome.context_asr;
    outcome.fitness2 = normalize_cost(outcome.c_token, task_);
    outcome.fitness_single =
        options_.weights.w1 * outcome.fitness1 + options_.weights.w2 * outcome.fitness2;
    return outcome;
}

EvalOutcome evaluate_group(const mrspace::MRGroup& group, const std::vector<InputText>& inputs,
                           const executor::TaskSpec& task, executor::Executor& exec,
                           const EmbeddingProvider& embedder, executor::ExecutionCache& cache,
                           const EvaluatorOptions& options) {
    GroupEvaluator evaluator(task, exec, embedder, cache, options);
    return evaluator.evaluate(group, inputs);
}

}  // namespace mrforge::fitness
