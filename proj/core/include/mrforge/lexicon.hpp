#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mrforge::perturb {

/// Word-pair lexicon backing synonym_replace / antonym_replace. Lookups are
/// case-insensitive on the key; unknown words have no entry. File format is
/// UTF-8, one record per line:
///
///   word<TAB>synonym1,synonym2,...<TAB>antonym1,antonym2,...
///
/// Either list may be empty. Lines starting with '#' are comments.
class Lexicon {
public:
    /// The compiled-in default lexicon (versioned with the library).
    static const Lexicon& embedded();

    static Lexicon load(const std::filesystem::path& path);
    static Lexicon parse(std::string_view content);

    const std::vector<std::string>* synonyms(std::string_view word) const;
    const std::vector<std::string>* antonyms(std::string_view word) const;

    std::size_t size() const { return entries_.size(); }
    const std::string& version() const { return version_; }

private:
    struct Entry {
        std::vector<std::string> synonyms;
        std::vector<std::string> antonyms;
    };
    std::unordered_map<std::string, Entry> entries_;
    std::string version_;
};

}  // namespace mrforge::perturb
