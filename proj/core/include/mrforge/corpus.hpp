#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mrforge/fitness.hpp"

namespace mrforge::corpus {

/// Validation report for a corpus file.
struct CorpusSummary {
    std::size_t records = 0;
    std::size_t valid = 0;
    std::vector<std::size_t> empty_text_lines;
    std::vector<std::string> duplicate_ids;
};

/// Loads a line-delimited JSON corpus of {"input_id", "text"} records.
/// Throws CorpusError (with line numbers) on parse failures, duplicate ids
/// or empty texts.
std::vector<fitness::InputText> load_corpus(const std::filesystem::path& path);

/// Parses and audits without failing on content violations; still throws
/// CorpusError for unreadable files, malformed JSON or an empty corpus.
CorpusSummary validate_corpus(const std::filesystem::path& path);

}  // namespace mrforge::corpus
