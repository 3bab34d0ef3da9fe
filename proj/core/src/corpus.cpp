#include "mrforge/corpus.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "mrforge/errors.hpp"

namespace mrforge::corpus {

namespace {

struct ParsedLine {
    std::string input_id;
    std::string text;
};

ParsedLine parse_line(const std::string& line, std::size_t line_no) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw CorpusError("corpus line " + std::to_string(line_no) +
                          ": invalid JSON: " + e.what());
    }
    if (!j.contains("input_id") || !j["input_id"].is_string())
        throw CorpusError("corpus line " + std::to_string(line_no) +
                          ": missing string field 'input_id'");
    if (!j.contains("text") || !j["text"].is_string())
        throw CorpusError("corpus line " + std::to_string(line_no) +
                          ": missing string field 'text'");
    return {j["input_id"].get<std::string>(), j["text"].get<std::string>()};
}

}  // namespace

std::vector<fitness::InputText> load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open corpus file: " + path.string());
    std::vector<fitness::InputText> records;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto parsed = parse_line(line, line_no);
        if (parsed.text.empty())
            throw CorpusError("corpus line " + std::to_string(line_no) + ": empty text for id '" +
                              parsed.input_id + "'");
        if (!seen.insert(parsed.input_id).second)
            throw CorpusError("corpus line " + std::to_string(line_no) + ": duplicate input_id '" +
                              parsed.input_id + "'");
        records.push_back({std::move(parsed.input_id), std::move(parsed.text)});
    }
    if (records.empty()) throw CorpusError("corpus file is empty: " + path.string());
    return records;
}

CorpusSummary validate_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open corpus file: " + path.string());
    CorpusSummary summary;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto parsed = parse_line(line, line_no);
        ++summary.records;
        bool ok = true;
        if (parsed.text.empty()) {
            summary.empty_text_lines.push_back(line_no);
            ok = false;
        }
        if (!seen.insert(parsed.input_id).second) {
            summary.duplicate_ids.push_back(parsed.input_id);
            ok = false;
        }
        if (ok) ++summary.valid;
    }
    if (summary.records == 0) throw CorpusError("corpus file is empty: " + path.string());
    return summary;
}

}  // namespace mrforge::corpus
