// mrforge CLI: search-based selection of metamorphic relation groups for
// LLM robustness testing.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mrforge/errors.hpp"
#include "mrforge/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCorpus = 3;
constexpr int kExitExecutor = 4;

void emit_error(const std::string& kind, const std::string& message) {
    nlohmann::ordered_json err = {{"error", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
}

int classify_and_report(const std::exception& e) {
    if (dynamic_cast<const mrforge::CorpusError*>(&e)) {
        emit_error("corpus", e.what());
        return kExitCorpus;
    }
    if (dynamic_cast<const mrforge::ExecutorUnavailableError*>(&e) ||
        dynamic_cast<const mrforge::MalformedResponseError*>(&e)) {
        emit_error("executor", e.what());
        return kExitExecutor;
    }
    emit_error("config", e.what());
    return kExitConfig;
}

struct RunArgs {
    std::string config_path;
    std::string out;
    std::string executor_kind;
    std::string algorithms;
    std::string corpus;
    std::string cache;
    int reps = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool trace = false;
};

mrforge::cli::ExperimentPlan resolve_plan(const RunArgs& args) {
    mrforge::cli::ExperimentPlan plan;
    if (!args.config_path.empty()) plan = mrforge::cli::load_plan(args.config_path);
    if (!args.out.empty()) plan.output_dir = args.out;
    if (!args.executor_kind.empty()) plan.executor_kind = args.executor_kind;
    if (!args.corpus.empty()) plan.corpus_path = args.corpus;
    if (!args.cache.empty()) plan.cache_path = args.cache;
    if (args.reps > 0) plan.repetitions = args.reps;
    if (args.seed_set) plan.search.seed = args.seed;
    if (args.trace) plan.emit_trace = true;
    if (!args.algorithms.empty()) {
        plan.algorithms.clear();
        std::size_t pos = 0;
        while (pos <= args.algorithms.size()) {
            std::size_t comma = args.algorithms.find(',', pos);
            if (comma == std::string::npos) comma = args.algorithms.size();
            std::string name = args.algorithms.substr(pos, comma - pos);
            if (!name.empty())
                plan.algorithms.push_back(mrforge::search::algorithm_from_string(name));
            pos = comma + 1;
        }
    }
    return plan;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Search-based selection of metamorphic relation groups"};
    app.require_subcommand(1);

    RunArgs args;

    auto* run = app.add_subcommand("run", "Execute an experiment plan");
    run->add_option("--config", args.config_path, "Plan JSON file");
    run->add_option("--out", args.out, "Output directory");
    run->add_option("--executor", args.executor_kind, "Executor backend")
        ->check(CLI::IsMember({"surrogate", "remote"}));
    run->add_option("--algorithms", args.algorithms,
                    "Comma list of single_ga,nsga2,spea2,moead,random");
    run->add_option("--reps", args.reps, "Repetitions per algorithm");
    run->add_option("--corpus", args.corpus, "Corpus JSONL file");
    run->add_option("--cache", args.cache, "Execution cache file");
    run->add_option("--seed", args.seed, "Master seed")->each([&](const std::string&) {
        args.seed_set = true;
    });
    run->add_flag("--trace", args.trace, "Emit per-evaluation trace CSV");

    std::vector<std::string> compare_dirs;
    std::string compare_out = "compare";
    auto* compare = app.add_subcommand("compare", "Statistical comparison of completed runs");
    compare->add_option("dirs", compare_dirs, "Run output directories")->required();
    compare->add_option("--out", compare_out, "Report directory");

    auto* corpus_cmd = app.add_subcommand("corpus", "Corpus utilities");
    std::string corpus_path;
    auto* corpus_validate = corpus_cmd->add_subcommand("validate", "Validate a corpus file");
    corpus_validate->add_option("path", corpus_path, "Corpus JSONL file")->required();

    auto* cache_cmd = app.add_subcommand("cache", "Cache utilities");
    std::string cache_path;
    auto* cache_stats = cache_cmd->add_subcommand("stats", "Report cache statistics");
    cache_stats->add_option("path", cache_path, "Cache file")->required();

    auto* catalog_cmd = app.add_subcommand("catalog", "Perturbation catalog utilities");
    std::string catalog_out;
    auto* catalog_export = catalog_cmd->add_subcommand("export", "Export the catalog as JSON");
    catalog_export->add_option("--out", catalog_out, "Write to file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto plan = resolve_plan(args);
            auto summary = mrforge::cli::cmd_run(plan);
            nlohmann::ordered_json out = {{"executed", summary.executed},
                                          {"skipped", summary.skipped},
                                          {"output_dir", plan.output_dir.string()}};
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }
        if (compare->parsed()) {
            std::vector<std::filesystem::path> dirs(compare_dirs.begin(), compare_dirs.end());
            auto summary = mrforge::cli::cmd_compare(dirs, compare_out);
            nlohmann::ordered_json out = {{"task_id", summary.task_id},
                                          {"model_id", summary.model_id},
                                          {"alpha", summary.alpha},
                                          {"reports", summary.reports.size()}};
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }
        if (corpus_validate->parsed()) {
            auto summary = mrforge::cli::cmd_corpus_validate(corpus_path);
            nlohmann::ordered_json out = {{"records", summary.records},
                                          {"valid", summary.valid},
                                          {"empty_text_lines", summary.empty_text_lines},
                                          {"duplicate_ids", summary.duplicate_ids}};
            std::cout << out.dump(2) << "\n";
            return summary.valid == summary.records ? kExitOk : kExitCorpus;
        }
        if (cache_stats->parsed()) {
            std::cout << mrforge::cli::cmd_cache_stats(cache_path).dump(2) << "\n";
            return kExitOk;
        }
        if (catalog_export->parsed()) {
            auto j = mrforge::cli::cmd_catalog_export();
            if (catalog_out.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                std::ofstream out(catalog_out);
                out << j.dump(2) << "\n";
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        return classify_and_report(e);
    }
    emit_error("config", "no subcommand given");
    return kExitConfig;
}
