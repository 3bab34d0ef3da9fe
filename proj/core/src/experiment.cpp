#include "mrforge/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "mrforge/analysis.hpp"
#include "mrforge/errors.hpp"

namespace mrforge::cli {

namespace fs = std::filesystem;

const fitness::EmbeddingProvider& default_embedder() {
    static const fitness::TrigramEmbedder embedder;
    return embedder;
}

CorpusProblem::CorpusProblem(std::vector<fitness::InputText> corpus,
                             std::vector<mrspace::SingleMR> set_mr,
                             fitness::GroupEvaluator& evaluator, int inputs_per_iteration,
                             std::uint64_t input_seed)
    : corpus_(std::move(corpus)),
      set_mr_(std::move(set_mr)),
      evaluator_(evaluator),
      inputs_per_iteration_(inputs_per_iteration),
      input_seed_(input_seed) {
    if (corpus_.empty()) throw CorpusError("CorpusProblem: empty corpus");
}

const std::vector<fitness::InputText>& CorpusProblem::inputs_for(int generation) {
    auto it = sample_cache_.find(generation);
    if (it != sample_cache_.end()) return it->second;
    SeededRng rng(combine_seed(input_seed_,
                               combine_seed(fnv1a64("inputs"),
                                            static_cast<std::uint64_t>(generation))));
    std::vector<std::size_t> idx(corpus_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx);
    std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(inputs_per_iteration_),
                                             corpus_.size());
    std::vector<fitness::InputText> sample;
    sample.reserve(take);
    for (std::size_t i = 0; i < take; ++i) sample.push_back(corpus_[idx[i]]);
    return sample_cache_.emplace(generation, std::move(sample)).first->second;
}

fitness::EvalOutcome CorpusProblem::evaluate(const mrspace::MRGroup& group, int generation) {
    ++evaluations_;
    return evaluator_.evaluate(group, inputs_for(generation));
}

void ExperimentPlan::validate() const {
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (algorithms.empty()) throw ConfigError("algorithms must be non-empty");
    if (tasks.empty()) throw ConfigError("tasks must be non-empty");
    for (const auto& t : tasks) executor::task_by_id(t);  // throws on unknown
    if (executor_kind != "surrogate" && executor_kind != "remote")
        throw ConfigError("executor must be 'surrogate' or 'remote'");
    search.validate();
    if (corpus_path.empty()) throw ConfigError("corpus_path is required");
    if (!fs::exists(corpus_path)) throw CorpusError("corpus_path not found: " + corpus_path.string());
}

namespace {

nlohmann::ordered_json profile_to_json(const executor::VulnerabilityProfile& p) {
    nlohmann::ordered_json flip = nlohmann::ordered_json::object();
    for (const auto& [k, v] : p.flip) flip[k] = v;
    nlohmann::ordered_json corruption = nlohmann::ordered_json::object();
    for (const auto& [k, v] : p.corruption) corruption[k] = v;
    return {{"flip", std::move(flip)},
            {"corruption", std::move(corruption)},
            {"default_flip", p.default_flip},
            {"default_corruption", p.default_corruption}};
}

executor::VulnerabilityProfile profile_from_json(const nlohmann::json& j) {
    executor::VulnerabilityProfile p;
    if (j.contains("flip")) {
        for (const auto& [k, v] : j.at("flip").items()) p.flip[k] = v.get<double>();
    }
    if (j.contains("corruption")) {
        for (const auto& [k, v] : j.at("corruption").items()) p.corruption[k] = v.get<double>();
    }
    if (j.contains("default_flip")) p.default_flip = j.at("default_flip").get<double>();
    if (j.contains("default_corruption"))
        p.default_corruption = j.at("default_corruption").get<double>();
    return p;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path.string());
    out << content;
}

std::string cell_prefix(const std::string& task_id, search::Algorithm algorithm,
                        int repetition) {
    return task_id + "_" + std::string(search::to_string(algorithm)) + "_rep" +
           std::to_string(repetition);
}

}  // namespace

nlohmann::ordered_json plan_to_json(const ExperimentPlan& plan) {
    nlohmann::ordered_json algos = nlohmann::ordered_json::array();
    for (auto a : plan.algorithms) algos.push_back(std::string(search::to_string(a)));
    return {{"algorithms", std::move(algos)},
            {"repetitions", plan.repetitions},
            {"tasks", plan.tasks},
            {"model_id", plan.model_id},
            {"executor", plan.executor_kind},
            {"profile", profile_to_json(plan.profile)},
            {"search", search::config_to_json(plan.search)},
            {"corpus_path", plan.corpus_path.string()},
            {"cache_path", plan.cache_path.string()},
            {"output_dir", plan.output_dir.string()},
            {"emit_trace", plan.emit_trace}};
}

ExperimentPlan plan_from_json(const nlohmann::json& j) {
    ExperimentPlan plan;
    if (j.contains("algorithms")) {
        plan.algorithms.clear();
        for (const auto& a : j.at("algorithms"))
            plan.algorithms.push_back(search::algorithm_from_string(a.get<std::string>()));
    }
    if (j.contains("repetitions")) plan.repetitions = j.at("repetitions").get<int>();
    if (j.contains("tasks")) plan.tasks = j.at("tasks").get<std::vector<std::string>>();
    if (j.contains("model_id")) plan.model_id = j.at("model_id").get<std::string>();
    if (j.contains("executor")) plan.executor_kind = j.at("executor").get<std::string>();
    if (j.contains("profile")) plan.profile = profile_from_json(j.at("profile"));
    if (j.contains("search")) plan.search = search::config_from_json(j.at("search"));
    if (j.contains("remote")) {
        const auto& r = j.at("remote");
        if (r.contains("endpoint")) plan.remote.endpoint = r.at("endpoint").get<std::string>();
        if (r.contains("timeout_s")) plan.remote.timeout_s = r.at("timeout_s").get<double>();
        if (r.contains("max_attempts")) plan.remote.max_attempts = r.at("max_attempts").get<int>();
    }
    if (j.contains("corpus_path")) plan.corpus_path = j.at("corpus_path").get<std::string>();
    if (j.contains("cache_path")) plan.cache_path = j.at("cache_path").get<std::string>();
    if (j.contains("output_dir")) plan.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("emit_trace")) plan.emit_trace = j.at("emit_trace").get<bool>();
    return plan;
}

ExperimentPlan load_plan(const fs::path& config_path) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + config_path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
    }
    ExperimentPlan plan = plan_from_json(j);
    // Endpoint secrets come from the environment, never the manifest.
    auto env = executor::RemoteOptions::from_env();
    if (!env.endpoint.empty()) plan.remote.endpoint = env.endpoint;
    plan.remote.api_key = env.api_key;
    return plan;
}

std::uint64_t repetition_seed(std::uint64_t master_seed, search::Algorithm algorithm,
                              int repetition) {
    return combine_seed(combine_seed(master_seed, fnv1a64(search::to_string(algorithm))),
                        static_cast<std::uint64_t>(repetition));
}

nlohmann::ordered_json outcome_to_json(const fitness::EvalOutcome& o) {
    return {{"context_asr", o.context_asr},
            {"mean_asr", o.mean_asr},
            {"mean_pq", o.mean_pq},
            {"c_token", o.c_token},
            {"fitness1", o.fitness1},
            {"fitness2", o.fitness2},
            {"fitness_single", o.fitness_single},
            {"failed_pairs", o.failed_pairs}};
}

fitness::EvalOutcome outcome_from_json(const nlohmann::json& j) {
    fitness::EvalOutcome o;
    o.context_asr = j.at("context_asr").get<double>();
    o.mean_asr = j.at("mean_asr").get<double>();
    o.mean_pq = j.at("mean_pq").get<double>();
    o.c_token = j.at("c_token").get<std::uint64_t>();
    o.fitness1 = j.at("fitness1").get<double>();
    o.fitness2 = j.at("fitness2").get<double>();
    o.fitness_single = j.at("fitness_single").get<double>();
    o.failed_pairs = j.at("failed_pairs").get<std::size_t>();
    return o;
}

namespace {

nlohmann::ordered_json archive_to_json(const search::Archive& archive) {
    std::vector<const search::ArchiveEntry*> order;
    for (const auto& e : archive.entries()) order.push_back(&e);
    std::sort(order.begin(), order.end(),
              [](const search::ArchiveEntry* a, const search::ArchiveEntry* b) {
                  if (a->outcome.fitness1 != b->outcome.fitness1)
                      return a->outcome.fitness1 < b->outcome.fitness1;
                  if (a->outcome.fitness2 != b->outcome.fitness2)
                      return a->outcome.fitness2 < b->outcome.fitness2;
                  return a->group.id < b->group.id;
              });
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto* e : order) {
        entries.push_back(
            {{"group", mrspace::to_json(e->group)}, {"outcome", outcome_to_json(e->outcome)}});
    }
    return {{"kind", archive.kind() == search::ArchiveKind::elite ? "elite" : "pareto"},
            {"entries", std::move(entries)}};
}

}  // namespace

RunSummary cmd_run(const ExperimentPlan& plan) {
    plan.validate();
    RunSummary summary;
    auto corpus = corpus::load_corpus(plan.corpus_path);

    std::unique_ptr<executor::ExecutionCache> cache =
        plan.cache_path.empty() ? std::make_unique<executor::ExecutionCache>()
                                : std::make_unique<executor::ExecutionCache>(plan.cache_path);

    std::unique_ptr<executor::Executor> exec;
    if (plan.executor_kind == "surrogate") {
        exec = std::make_unique<executor::SurrogateExecutor>(plan.profile);
    } else {
        auto opts = plan.remote;
        if (opts.endpoint.empty()) opts = executor::RemoteOptions::from_env();
        exec = std::make_unique<executor::RemoteExecutor>(opts);
    }

    fs::create_directories(plan.output_dir);

    for (const auto& task_id : plan.tasks) {
        executor::TaskSpec task = executor::task_by_id(task_id);
        if (!task.token_bounds.valid())
            task.token_bounds = fitness::derive_token_bounds(task, plan.search.group_max,
                                                             plan.search.inputs_per_iteration);
        auto set_mr = mrspace::build_set_mr(perturb::catalog(), plan.search.set_mr_intensities);

        for (auto algorithm : plan.algorithms) {
            for (int rep = 0; rep < plan.repetitions; ++rep) {
                const std::string prefix = cell_prefix(task_id, algorithm, rep);
                const fs::path manifest_path = plan.output_dir / (prefix + "_manifest.json");
                if (fs::exists(manifest_path)) {
                    ++summary.skipped;
                    summary.manifests.push_back(manifest_path);
                    continue;
                }

                search::SearchConfig config = plan.search;
                config.seed = repetition_seed(plan.search.seed, algorithm, rep);

                fitness::EvaluatorOptions eval_opts;
                eval_opts.model_id = plan.model_id;
                eval_opts.weights = config.weights;
                eval_opts.sim_threshold = config.sim_threshold;
                eval_opts.workers = config.workers;
                fitness::GroupEvaluator evaluator(task, *exec, default_embedder(), *cache,
                                                  eval_opts);

                // Input sampling depends on (master seed, repetition) only,
                // so algorithms are compared on identical input sequences.
                CorpusProblem problem(corpus, set_mr, evaluator, config.inputs_per_iteration,
                                      combine_seed(plan.search.seed,
                                                   static_cast<std::uint64_t>(rep)));

                auto t0 = std::chrono::steady_clock::now();
                search::RunResult result = search::run_algorithm(algorithm, problem, config);
                double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                  .count();

                nlohmann::ordered_json generations = nlohmann::ordered_json::array();
                for (const auto& g : result.history) {
                    generations.push_back({{"generation", g.generation},
                                           {"best_fitness_single", g.best_fitness_single},
                                           {"best_f1", g.best_f1},
                                           {"best_f2", g.best_f2},
                                           {"mean_f1", g.mean_f1},
                                           {"mean_f2", g.mean_f2}});
                }
                const auto& best = result.archive.best();
                nlohmann::ordered_json manifest = {
                    {"schema", "mrforge-run-1"},
                    {"task_id", task_id},
                    {"model_id", plan.model_id},
                    {"algorithm", std::string(search::to_string(algorithm))},
                    {"repetition", rep},
                    {"seed", config.seed},
                    {"master_seed", plan.search.seed},
                    {"config", search::config_to_json(config)},
                    {"generations", std::move(generations)},
                    {"final",
                     {{"generations", result.generations},
                      {"evaluations", result.evaluations},
                      {"best_fitness_single", best.outcome.fitness_single},
                      {"best_f1", best.outcome.fitness1},
                      {"best_f2", best.outcome.fitness2}}}};

                write_file(plan.output_dir / (prefix + "_archive.json"),
                           archive_to_json(result.archive).dump(2) + "\n");
                nlohmann::ordered_json stats = {{"wall_clock_s", wall},
                                                {"executor_calls", evaluator.executor_calls()},
                                                {"cache_hits", evaluator.cache_hits()},
                                                {"warnings", evaluator.warnings()},
                                                {"evaluations", result.evaluations}};
                write_file(plan.output_dir / (prefix + "_stats.json"), stats.dump(2) + "\n");
                if (plan.emit_trace) {
                    std::vector<fitness::TraceRow> rows;
                    evaluator.evaluate(best.group, problem.inputs_for(result.generations - 1),
                                       &rows);
                    std::ostringstream os;
                    fitness::write_trace_csv(os, rows);
                    write_file(plan.output_dir / (prefix + "_trace.csv"), os.str());
                }
                // Manifest last: its presence marks the cell as completed.
                write_file(manifest_path, manifest.dump(2) + "\n");
                summary.manifests.push_back(manifest_path);
                ++summary.executed;
            }
        }
    }
    return summary;
}

namespace {

struct LoadedRun {
    std::string task_id;
    std::string model_id;
    std::string algorithm;
    int repetition = 0;
    std::size_t dir_index = 0;
    double final_best = 0.0;
    nlohmann::json generations;
    fs::path archive_path;
};

std::vector<LoadedRun> load_runs(const std::vector<fs::path>& run_dirs) {
    std::vector<LoadedRun> runs;
    for (std::size_t dir_index = 0; dir_index < run_dirs.size(); ++dir_index) {
        const auto& dir = run_dirs[dir_index];
        if (!fs::is_directory(dir))
            throw IncompatibleRunsError("run directory not found: " + dir.string());
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.path().filename().string().ends_with("_manifest.json"))
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            std::ifstream in(f, std::ios::binary);
            nlohmann::json m;
            try {
                in >> m;
            } catch (const nlohmann::json::exception& e) {
                throw IncompatibleRunsError("unreadable manifest " + f.string() + ": " + e.what());
            }
            LoadedRun run;
            run.task_id = m.at("task_id").get<std::string>();
            run.model_id = m.at("model_id").get<std::string>();
            run.algorithm = m.at("algorithm").get<std::string>();
            run.repetition = m.at("repetition").get<int>();
            run.dir_index = dir_index;
            run.final_best = m.at("final").at("best_fitness_single").get<double>();
            run.generations = m.at("generations");
            std::string stem = f.filename().string();
            stem.erase(stem.size() - std::string("_manifest.json").size());
            run.archive_path = f.parent_path() / (stem + "_archive.json");
            runs.push_back(std::move(run));
        }
    }
    if (runs.size() < 2) throw IncompatibleRunsError("compare needs at least 2 completed runs");
    for (const auto& r : runs) {
        if (r.task_id != runs.front().task_id || r.model_id != runs.front().model_id)
            throw IncompatibleRunsError("runs mix tasks or models: " + r.task_id + "/" +
                                        r.model_id + " vs " + runs.front().task_id + "/" +
                                        runs.front().model_id);
    }
    return runs;
}

std::string csv_escape(const std::string& s) { return s; }  // labels are identifier-like

}  // namespace

CompareSummary cmd_compare(const std::vector<fs::path>& run_dirs, const fs::path& out_dir) {
    auto runs = load_runs(run_dirs);
    fs::create_directories(out_dir);
    CompareSummary summary;
    summary.task_id = runs.front().task_id;
    summary.model_id = runs.front().model_id;

    // Final-fitness samples per algorithm, ordered by repetition.
    std::map<std::string, std::vector<std::pair<int, double>>> by_algo;
    for (const auto& r : runs) by_algo[r.algorithm].push_back({r.repetition, r.final_best});
    std::vector<analysis::SampleSet> samples;
    for (auto& [algo, vals] : by_algo) {
        std::sort(vals.begin(), vals.end());
        analysis::SampleSet s;
        s.label = algo;
        for (auto& [rep, v] : vals) s.values.push_back(v);
        samples.push_back(std::move(s));
    }

    // Per-directory samples support cross-run checks (a rerun with the same
    // seeds compares as identical, MWU p = 1).
    std::map<std::string, std::map<std::size_t, std::vector<double>>> by_algo_dir;
    for (const auto& r : runs) by_algo_dir[r.algorithm][r.dir_index].push_back(r.final_best);

    const int k = static_cast<int>(samples.size());
    const int comparisons = std::max(1, k * (k - 1) / 2);
    summary.alpha = analysis::bonferroni_alpha(0.05, comparisons);

    nlohmann::ordered_json report;
    report["schema"] = "mrforge-compare-1";
    report["task_id"] = summary.task_id;
    report["model_id"] = summary.model_id;
    report["alpha"] = summary.alpha;

    // Kruskal-Wallis across all algorithms.
    std::string kw_csv = "test,scope,H,p,significant\n";
    if (k >= 2) {
        auto kw = analysis::kruskal_wallis(samples);
        report["kruskal_wallis"] = {{"H", kw.H}, {"p", kw.p}, {"significant", kw.p < summary.alpha}};
        kw_csv += "kruskal_wallis,fitness," + std::to_string(kw.H) + "," + std::to_string(kw.p) +
                  "," + (kw.p < summary.alpha ? std::string("true") : std::string("false")) + "\n";
    }

    // Pairwise vs the random baseline.
    std::string mwu_csv = "comparison,U,p,exact,significant\n";
    std::string a12_csv = "comparison,a12,magnitude,direction\n";
    nlohmann::ordered_json mwu_rows = nlohmann::ordered_json::array();
    nlohmann::ordered_json a12_rows = nlohmann::ordered_json::array();
    const analysis::SampleSet* random_samples = nullptr;
    for (const auto& s : samples) {
        if (s.label == "random") random_samples = &s;
    }
    if (random_samples) {
        for (const auto& s : samples) {
            if (s.label == "random") continue;
            auto mwu = analysis::mann_whitney_u(s, *random_samples);
            auto a12 = analysis::vargha_delaney_a(s, *random_samples);
            std::string comparison = s.label + "_vs_random";
            mwu_rows.push_back({{"comparison", comparison},
                                {"U", mwu.U},
                                {"p", mwu.p},
                                {"exact", mwu.exact},
                                {"significant", mwu.p < summary.alpha}});
            a12_rows.push_back({{"comparison", comparison},
                                {"a12", a12.a12},
                                {"magnitude", std::string(analysis::to_string(a12.magnitude))},
                                {"direction", std::string(1, a12.direction)}});
            mwu_csv += comparison + "," + std::to_string(mwu.U) + "," + std::to_string(mwu.p) +
                       "," + (mwu.exact ? "true" : "false") + "," +
                       (mwu.p < summary.alpha ? "true" : "false") + "\n";
            a12_csv += comparison + "," + std::to_string(a12.a12) + "," +
                       std::string(analysis::to_string(a12.magnitude)) + "," + a12.direction +
                       "\n";
        }
    }
    report["mann_whitney_u"] = mwu_rows;
    report["vargha_delaney_a"] = a12_rows;

    // Cross-run rows: same algorithm compared across input directories.
    nlohmann::ordered_json cross_rows = nlohmann::ordered_json::array();
    for (const auto& [algo, dirs] : by_algo_dir) {
        if (dirs.size() < 2) continue;
        std::vector<std::pair<std::size_t, std::vector<double>>> ordered(dirs.begin(),
                                                                         dirs.end());
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            for (std::size_t j = i + 1; j < ordered.size(); ++j) {
                analysis::SampleSet sa{algo, ordered[i].second};
                analysis::SampleSet sb{algo, ordered[j].second};
                std::sort(sa.values.begin(), sa.values.end());
                std::sort(sb.values.begin(), sb.values.end());
                auto mwu = analysis::mann_whitney_u(sa, sb);
                std::string label = algo + "_run" + std::to_string(ordered[i].first) + "_vs_run" +
                                    std::to_string(ordered[j].first);
                cross_rows.push_back({{"comparison", label},
                                      {"U", mwu.U},
                                      {"p", mwu.p},
                                      {"exact", mwu.exact},
                                      {"significant", mwu.p < summary.alpha}});
                mwu_csv += label + "," + std::to_string(mwu.U) + "," + std::to_string(mwu.p) +
                           "," + (mwu.exact ? "true" : "false") + "," +
                           (mwu.p < summary.alpha ? "true" : "false") + "\n";
            }
        }
    }
    report["mann_whitney_u_cross_runs"] = cross_rows;

    // Dunn's pairwise matrix across all algorithms.
    std::string dunn_csv = "a,b,p,significant\n";
    nlohmann::ordered_json dunn_rows = nlohmann::ordered_json::array();
    if (k >= 2) {
        auto dunn = analysis::dunns_test(samples);
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                dunn_rows.push_back({{"a", samples[i].label},
                                     {"b", samples[j].label},
                                     {"p", dunn[i][j]},
                                     {"significant", dunn[i][j] < summary.alpha}});
                dunn_csv += csv_escape(samples[i].label) + "," + csv_escape(samples[j].label) +
                            "," + std::to_string(dunn[i][j]) + "," +
                            (dunn[i][j] < summary.alpha ? "true" : "false") + "\n";
            }
        }
    }
    report["dunn"] = dunn_rows;

    // Hypervolume of final pareto archives, ref (1,1).
    std::string hv_csv = "algorithm,repetition,hypervolume\n";
    std::map<std::string, std::vector<double>> hv_by_algo;
    for (const auto& r : runs) {
        if (!fs::exists(r.archive_path)) continue;
        std::ifstream in(r.archive_path, std::ios::binary);
        nlohmann::json archive;
        in >> archive;
        if (archive.at("kind").get<std::string>() != "pareto") continue;
        std::vector<std::array<double, 2>> points;
        for (const auto& e : archive.at("entries")) {
            points.push_back({e.at("outcome").at("fitness1").get<double>(),
                              e.at("outcome").at("fitness2").get<double>()});
        }
        double hv = analysis::hypervolume(points, {1.0, 1.0});
        hv_by_algo[r.algorithm].push_back(hv);
        hv_csv += r.algorithm + "," + std::to_string(r.repetition) + "," + std::to_string(hv) +
                  "\n";
    }
    nlohmann::ordered_json hv_report = nlohmann::ordered_json::object();
    for (const auto& [algo, values] : hv_by_algo) {
        double mean = 0.0;
        for (double v : values) mean += v;
        if (!values.empty()) mean /= static_cast<double>(values.size());
        hv_report[algo] = {{"mean", mean}, {"samples", values}};
    }
    report["hypervolume"] = hv_report;

    // Convergence series.
    std::string conv_csv = "algorithm,repetition,generation,best_fitness_single,mean_f1,mean_f2\n";
    nlohmann::ordered_json conv_json = nlohmann::ordered_json::array();
    for (const auto& r : runs) {
        for (const auto& g : r.generations) {
            int generation = g.at("generation").get<int>();
            double best = g.at("best_fitness_single").get<double>();
            double mean_f1 = g.at("mean_f1").get<double>();
            double mean_f2 = g.at("mean_f2").get<double>();
            conv_csv += r.algorithm + "," + std::to_string(r.repetition) + "," +
                        std::to_string(generation) + "," + std::to_string(best) + "," +
                        std::to_string(mean_f1) + "," + std::to_string(mean_f2) + "\n";
            conv_json.push_back({{"algorithm", r.algorithm},
                                 {"repetition", r.repetition},
                                 {"generation", generation},
                                 {"best_fitness_single", best},
                                 {"mean_f1", mean_f1},
                                 {"mean_f2", mean_f2}});
        }
    }

    auto emit = [&](const std::string& name, const std::string& content) {
        fs::path p = out_dir / name;
        write_file(p, content);
        summary.reports.push_back(p);
    };
    emit("kw.csv", kw_csv);
    emit("mwu.csv", mwu_csv);
    emit("a12.csv", a12_csv);
    emit("dunn.csv", dunn_csv);
    emit("hv.csv", hv_csv);
    emit("convergence.csv", conv_csv);
    emit("convergence.json", conv_json.dump(2) + "\n");
    emit("report.json", report.dump(2) + "\n");
    return summary;
}

corpus::CorpusSummary cmd_corpus_validate(const fs::path& path) {
    return corpus::validate_corpus(path);
}

nlohmann::ordered_json cmd_cache_stats(const fs::path& cache_path) {
    executor::ExecutionCache cache(cache_path);
    return {{"path", cache_path.string()},
            {"records", cache.size()},
            {"corrupt_records", cache.corrupt_records()}};
}

nlohmann::ordered_json cmd_catalog_export() { return perturb::catalog_json(); }

}  // namespace mrforge::cli
