#include "mrforge/perturb.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "mrforge/errors.hpp"
#include "mrforge/text.hpp"

namespace mrforge::perturb {

std::string_view to_string(Level level) {
    switch (level) {
        case Level::character: return "character";
        case Level::word: return "word";
        case Level::sentence: return "sentence";
        case Level::graphical: return "graphical";
    }
    return "?";
}

std::string_view to_string(ContextType type) {
    return type == ContextType::preserving ? "preserving" : "altering";
}

const std::vector<PerturbationDescriptor>& catalog() {
    static const std::vector<PerturbationDescriptor> entries = {
        {"delete_character", Level::character, ContextType::preserving, "Delete character"},
        {"swap_character", Level::character, ContextType::preserving, "Swap adjacent characters"},
        {"replace_character", Level::character, ContextType::preserving, "Replace character"},
        {"insert_character", Level::character, ContextType::preserving, "Insert character"},
        {"add_whitespace", Level::character, ContextType::preserving, "Add whitespace"},
        {"l33t_transform", Level::graphical, ContextType::preserving, "Leetspeak transform"},
        {"swap_case", Level::graphical, ContextType::preserving, "Swap letter case"},
        {"add_random_word", Level::word, ContextType::preserving, "Add random word"},
        {"synonym_replace", Level::word, ContextType::preserving, "Replace with synonym"},
        {"shuffle_word", Level::word, ContextType::preserving, "Shuffle word interior"},
        {"antonym_replace", Level::word, ContextType::altering, "Replace with antonym"},
        {"remove_sentence", Level::sentence, ContextType::altering, "Remove sentence"},
        {"duplicate_sentence", Level::sentence, ContextType::preserving, "Duplicate sentence"},
    };
    return entries;
}

const PerturbationDescriptor& descriptor(std::string_view id) {
    for (const auto& d : catalog()) {
        if (d.id == id) return d;
    }
    throw UnknownPerturbationError("unknown perturbation id: " + std::string(id));
}

bool has_descriptor(std::string_view id) {
    for (const auto& d : catalog()) {
        if (d.id == id) return true;
    }
    return false;
}

nlohmann::ordered_json catalog_json() {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& d : catalog()) {
        out.push_back({{"id", d.id},
                       {"level", std::string(to_string(d.level))},
                       {"context_type", std::string(to_string(d.context_type))},
                       {"display_name", d.display_name},
                       {"max_intensity", d.max_intensity}});
    }
    return out;
}

namespace {

using CodePoints = std::vector<char32_t>;

constexpr std::array<std::pair<char32_t, char32_t>, 6> kLeetMap = {{
    {U'a', U'4'},
    {U'e', U'3'},
    {U'i', U'1'},
    {U'o', U'0'},
    {U't', U'7'},
    {U's', U'5'},
}};

// Filler vocabulary for add_random_word.
constexpr std::array<std::string_view, 12> kFillerWords = {
    "really", "just",  "quite", "rather", "actually", "simply",
    "fairly", "truly", "very",  "pretty", "somewhat", "indeed",
};

bool is_lower(char32_t c) { return c >= U'a' && c <= U'z'; }
bool is_upper(char32_t c) { return c >= U'A' && c <= U'Z'; }
bool is_alpha(char32_t c) { return is_lower(c) || is_upper(c); }
char32_t to_lower(char32_t c) { return is_upper(c) ? c + 32 : c; }

std::string delete_character(const std::string& s, SeededRng& rng) {
    CodePoints cps = text::decode_utf8(s);
    if (cps.size() < 2) throw EmptyResultError("delete_character: text too short to edit");
    cps.erase(cps.begin() + static_cast<std::ptrdiff_t>(rng.below(cps.size())));
    return text::encode_utf8(cps);
}

std::string swap_character(const std::string& s, SeededRng& rng) {
    CodePoints cps = text::decode_utf8(s);
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i + 1 < cps.size(); ++i) {
        if (cps[i] != cps[i + 1]) sites.push_back(i);
    }
    if (sites.empty()) return s;  // no applicable edit site
    std::size_t i = sites[rng.below(sites.size())];
    std::swap(cps[i], cps[i + 1]);
    return text::encode_utf8(cps);
}

std::string replace_character(const std::string& s, SeededRng& rng) {
    CodePoints cps = text::decode_utf8(s);
    if (cps.empty()) return s;
    std::size_t i = rng.below(cps.size());
    char32_t repl = U'a' + static_cast<char32_t>(rng.below(26));
    if (repl == to_lower(cps[i])) repl = U'a' + (repl - U'a' + 1) % 26;
    cps[i] = repl;
    return text::encode_utf8(cps);
}

std::string insert_character(const std::string& s, SeededRng& rng) {
    CodePoints cps = text::decode_utf8(s);
    std::size_t pos = rng.below(cps.size() + 1);
    char32_t ins = U'a' + static_cast<char32_t>(rng.below(26));
    cps.insert(cps.begin() + static_cast<std::ptrdiff_t>(pos), ins);
    return text::encode_utf8(cps);
}

std::string add_whitespace(const std::string& s, SeededRng& rng) {
    CodePoints cps = text::decode_utf8(s);
    std::size_t pos = rng.below(cps.size() + 1);
    cps.insert(cps.begin() + static_cast<std::ptrdiff_t>(pos), U' ');
    return text::encode_utf8(cps);
}

std::string l33t_transform(const std::string& s, SeededRng& rng) {
    CodePoints cps = text::decode_utf8(s);
    // Eligible classes: mapped letters present in the text. One unit edit
    // rewrites every occurrence of one class, so "meet" -> "m33t" at
    // intensity 1.
    std::vector<std::size_t> classes;
    for (std::size_t k = 0; k < kLeetMap.size(); ++k) {
        for (char32_t c : cps) {
            if (to_lower(c) == kLeetMap[k].first) {
                classes.push_back(k);
                break;
            }
        }
    }
    if (classes.empty()) return s;
    auto [from, to] = kLeetMap[classes[rng.below(classes.size())]];
    for (char32_t& c : cps) {
        if (to_lower(c) == from) c = to;
    }
    return text::encode_utf8(cps);
}

std::string swap_case(const std::string& s, SeededRng& rng) {
    CodePoints cps = text::decode_utf8(s);
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (is_alpha(cps[i])) sites.push_back(i);
    }
    if (sites.empty()) return s;
    std::size_t i = sites[rng.below(sites.size())];
    cps[i] = is_upper(cps[i]) ? cps[i] + 32 : cps[i] - 32;
    return text::encode_utf8(cps);
}

std::string add_random_word(const std::string& s, SeededRng& rng) {
    auto words = text::split_words(s);
    std::string filler(kFillerWords[rng.below(kFillerWords.size())]);
    std::size_t pos = rng.below(words.size() + 1);
    words.insert(words.begin() + static_cast<std::ptrdiff_t>(pos), filler);
    return text::join(words, " ");
}

std::string match_case(const std::string& replacement, const std::string& original) {
    if (!original.empty() && std::isupper(static_cast<unsigned char>(original[0])) &&
        !replacement.empty()) {
        std::string out = replacement;
        out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
        return out;
    }
    return replacement;
}

std::string lexicon_replace(const std::string& s, SeededRng& rng, const Lexicon& lexicon,
                            bool antonym) {
    auto words = text::split_words(s);
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::string core = text::strip_punct(words[i]);
        const auto* alts = antonym ? lexicon.antonyms(core) : lexicon.synonyms(core);
        if (alts) sites.push_back(i);
    }
    if (sites.empty()) return s;  // unknown words are left untouched
    std::size_t i = sites[rng.below(sites.size())];
    std::string lead, trail;
    std::string core = text::strip_punct(words[i], &lead, &trail);
    const auto* alts = antonym ? lexicon.antonyms(core) : lexicon.synonyms(core);
    const std::string& pick = (*alts)[rng.below(alts->size())];
    words[i] = lead + match_case(pick, core) + trail;
    return text::join(words, " ");
}

std::string shuffle_word(const std::string& s, SeededRng& rng) {
    auto words = text::split_words(s);
    // Eligible words have >= 4 core letters and at least two distinct
    // interior characters, so shuffling can change them.
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::string core = text::strip_punct(words[i]);
        CodePoints cps = text::decode_utf8(core);
        if (cps.size() < 4) continue;
        bool distinct = false;
        for (std::size_t k = 2; k + 1 < cps.size(); ++k) {
            if (cps[k] != cps[1]) distinct = true;
        }
        if (distinct) sites.push_back(i);
    }
    if (sites.empty()) return s;
    std::size_t i = sites[rng.below(sites.size())];
    std::string lead, trail;
    std::string core = text::strip_punct(words[i], &lead, &trail);
    CodePoints cps = text::decode_utf8(core);
    // Shuffle interior only, keeping first and last characters in place.
    CodePoints interior(cps.begin() + 1, cps.end() - 1);
    SeededRng inner = rng.fork(17);
    CodePoints shuffled = interior;
    // Retry a few forks if the permutation happens to be identity, then
    // force a swap so an eligible word always changes.
    for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
        shuffled = interior;
        SeededRng sh = inner.fork(attempt);
        sh.shuffle(shuffled);
        if (shuffled != interior) break;
    }
    if (shuffled == interior) {
        for (std::size_t k = 1; k < shuffled.size(); ++k) {
            if (shuffled[k] != shuffled[0]) {
                std::swap(shuffled[0], shuffled[k]);
                break;
            }
        }
    }
    std::copy(shuffled.begin(), shuffled.end(), cps.begin() + 1);
    words[i] = lead + text::encode_utf8(cps) + trail;
    return text::join(words, " ");
}

std::string remove_sentence(const std::string& s, SeededRng& rng) {
    auto sentences = text::split_sentences(s);
    if (sentences.size() < 2)
        throw EmptyResultError("remove_sentence: text has a single sentence");
    sentences.erase(sentences.begin() + static_cast<std::ptrdiff_t>(rng.below(sentences.size())));
    return text::join(sentences, " ");
}

std::string duplicate_sentence(const std::string& s, SeededRng& rng) {
    auto sentences = text::split_sentences(s);
    if (sentences.empty()) return s;
    std::size_t i = rng.below(sentences.size());
    sentences.insert(sentences.begin() + static_cast<std::ptrdiff_t>(i), sentences[i]);
    return text::join(sentences, " ");
}

std::string unit_edit(const PerturbationDescriptor& desc, const std::string& s, SeededRng& rng,
                      const Lexicon& lexicon) {
    if (desc.id == "delete_character") return delete_character(s, rng);
    if (desc.id == "swap_character") return swap_character(s, rng);
    if (desc.id == "replace_character") return replace_character(s, rng);
    if (desc.id == "insert_character") return insert_character(s, rng);
    if (desc.id == "add_whitespace") return add_whitespace(s, rng);
    if (desc.id == "l33t_transform") return l33t_transform(s, rng);
    if (desc.id == "swap_case") return swap_case(s, rng);
    if (desc.id == "add_random_word") return add_random_word(s, rng);
    if (desc.id == "synonym_replace") return lexicon_replace(s, rng, lexicon, false);
    if (desc.id == "antonym_replace") return lexicon_replace(s, rng, lexicon, true);
    if (desc.id == "shuffle_word") return shuffle_word(s, rng);
    if (desc.id == "remove_sentence") return remove_sentence(s, rng);
    if (desc.id == "duplicate_sentence") return duplicate_sentence(s, rng);
    throw UnknownPerturbationError("unit edit not implemented: " + desc.id);
}

}  // namespace

std::string apply(std::string_view id, std::string_view input, int intensity,
                  const SeededRng& rng, const Lexicon& lexicon) {
    const PerturbationDescriptor& desc = descriptor(id);
    if (input.empty()) throw EmptyInputError("apply: empty input text");
    if (intensity < 1 || intensity > desc.max_intensity)
        throw IntensityOutOfRangeError("apply: intensity " + std::to_string(intensity) +
                                       " outside [1," + std::to_string(desc.max_intensity) +
                                       "] for " + desc.id);
    std::string current(input);
    for (int unit = 0; unit < intensity; ++unit) {
        SeededRng unit_rng = rng.fork(static_cast<std::uint64_t>(unit));
        current = unit_edit(desc, current, unit_rng, lexicon);
    }
    return current;
}

}  // namespace mrforge::perturb
