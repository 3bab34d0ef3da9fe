#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>

#include <doctest.h>

#include "mrforge/corpus.hpp"
#include "mrforge/embedding.hpp"
#include "mrforge/errors.hpp"
#include "mrforge/fitness.hpp"
#include "mrforge/perturb.hpp"
#include "mrforge/text.hpp"

using namespace mrforge;
using perturb::ContextType;
using perturb::Level;

namespace {

// Oracle: is `target` reachable from `start` by at most `budget` adjacent
// transpositions? Breadth-first over the (tiny) state space.
bool reachable_by_adjacent_swaps(const std::string& start, const std::string& target,
                                 int budget) {
    if (start.size() != target.size()) return false;
    std::set<std::string> seen{start};
    std::queue<std::pair<std::string, int>> frontier;
    frontier.push({start, 0});
    while (!frontier.empty()) {
        auto [s, d] = frontier.front();
        frontier.pop();
        if (s == target) return true;
        if (d == budget) continue;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            std::string next = s;
            std::swap(next[i], next[i + 1]);
            if (seen.insert(next).second) frontier.push({next, d + 1});
        }
    }
    return false;
}

std::vector<std::string> corpus_sample(std::size_t n) {
    auto all = corpus::load_corpus(std::string(MRFORGE_DATA_DIR) + "/corpus.jsonl");
    std::vector<std::string> texts;
    for (std::size_t i = 0; i < std::min(n, all.size()); ++i) texts.push_back(all[i].text);
    return texts;
}

double median(std::vector<double> v) {
    REQUIRE(!v.empty());
    std::sort(v.begin(), v.end());
    return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

}  // namespace

TEST_CASE("catalog covers the required descriptors") {
    const auto& cat = perturb::catalog();
    CHECK(cat.size() >= 12);

    std::set<std::string> ids;
    std::set<Level> levels;
    std::set<ContextType> types;
    for (const auto& d : cat) {
        CHECK(ids.insert(d.id).second);  // all ids distinct
        levels.insert(d.level);
        types.insert(d.context_type);
    }
    CHECK(levels.size() == 4);
    CHECK(types.size() == 2);

    for (const char* required :
         {"delete_character", "swap_character", "replace_character", "insert_character",
          "l33t_transform", "add_random_word", "synonym_replace", "shuffle_word",
          "antonym_replace", "remove_sentence", "duplicate_sentence", "add_whitespace"}) {
        CAPTURE(required);
        CHECK(ids.count(required) == 1);
    }

    CHECK(perturb::descriptor("l33t_transform").level == Level::graphical);
    CHECK(perturb::descriptor("l33t_transform").context_type == ContextType::preserving);
    CHECK(perturb::descriptor("antonym_replace").context_type == ContextType::altering);
    CHECK(perturb::descriptor("remove_sentence").context_type == ContextType::altering);
}

TEST_CASE("apply validates its arguments") {
    SeededRng rng(1);
    CHECK_THROWS_AS(perturb::apply("nope", "text", 1, rng), UnknownPerturbationError);
    CHECK_THROWS_AS(perturb::apply("delete_character", "", 1, rng), EmptyInputError);
    CHECK_THROWS_AS(perturb::apply("delete_character", "text", 0, rng),
                    IntensityOutOfRangeError);
    CHECK_THROWS_AS(perturb::apply("delete_character", "text", 9, rng),
                    IntensityOutOfRangeError);
}

TEST_CASE("deletion-style edits on too-short text raise EmptyResultError") {
    SeededRng rng(7);
    CHECK_THROWS_AS(perturb::apply("delete_character", "a", 1, rng), EmptyResultError);
    CHECK_THROWS_AS(perturb::apply("remove_sentence", "Just one sentence.", 1, rng),
                    EmptyResultError);
}

TEST_CASE("apply is deterministic for every catalog entry") {
    auto texts = corpus_sample(10);
    for (const auto& d : perturb::catalog()) {
        for (int intensity : {1, 3}) {
            for (const auto& text : texts) {
                SeededRng rng(1234);
                std::string a, b;
                try {
                    a = perturb::apply(d.id, text, intensity, rng);
                    b = perturb::apply(d.id, text, intensity, rng);
                } catch (const EmptyResultError&) {
                    continue;
                }
                CAPTURE(d.id);
                CHECK(a == b);
            }
        }
    }
}

TEST_CASE("l33t_transform rewrites one letter class per unit") {
    // Searched seed: the unit picks the 'e' class on "meet".
    bool found = false;
    for (std::uint64_t seed = 0; seed < 64 && !found; ++seed) {
        if (perturb::apply("l33t_transform", "meet", 1, SeededRng(seed)) == "m33t") {
            found = true;
            // replay is stable
            CHECK(perturb::apply("l33t_transform", "meet", 1, SeededRng(seed)) == "m33t");
        }
    }
    CHECK(found);

    // Either class choice is a valid single-unit outcome.
    for (std::uint64_t seed = 0; seed < 16; ++seed) {
        auto out = perturb::apply("l33t_transform", "meet", 1, SeededRng(seed));
        CAPTURE(seed);
        CHECK((out == "m33t" || out == "mee7"));
    }

    // No mapped letter present: identity.
    CHECK(perturb::apply("l33t_transform", "xyz", 1, SeededRng(3)) == "xyz");
}

TEST_CASE("swap_character applies at most `intensity` adjacent transpositions") {
    const std::string text = "Nothing - All good for purpose";
    auto out = perturb::apply("swap_character", text, 3, SeededRng(42));
    CHECK(out.size() == text.size());
    std::string sorted_in = text, sorted_out = out;
    std::sort(sorted_in.begin(), sorted_in.end());
    std::sort(sorted_out.begin(), sorted_out.end());
    CHECK(sorted_in == sorted_out);
    CHECK(reachable_by_adjacent_swaps(text, out, 3));
    CHECK_FALSE(reachable_by_adjacent_swaps(text, out, 0));  // it did change
}

TEST_CASE("eligible edit sites always change the text") {
    SeededRng rng(11);
    const std::string text = "The quick brown fox. It jumps over the dog.";
    for (const char* id : {"delete_character", "swap_character", "replace_character",
                           "insert_character", "add_whitespace", "l33t_transform", "swap_case",
                           "add_random_word", "shuffle_word", "remove_sentence",
                           "duplicate_sentence", "synonym_replace"}) {
        CAPTURE(id);
        CHECK(perturb::apply(id, text, 1, rng) != text);
    }
    // No eligible swap site: identity fallback.
    CHECK(perturb::apply("swap_character", "aaaa", 1, rng) == "aaaa");
}

TEST_CASE("synonym_replace without lexicon hits returns the input unchanged") {
    SeededRng rng(5);
    CHECK(perturb::apply("synonym_replace", "zyxwv qqqq pppp", 1, rng) == "zyxwv qqqq pppp");
}

TEST_CASE("lexicon replacement uses the word-pair file and keeps case") {
    SeededRng rng(2);
    auto out = perturb::apply("antonym_replace", "Good stuff", 1, rng);
    CHECK(out != "Good stuff");
    auto words = text::split_words(out);
    REQUIRE(words.size() == 2);
    // "good" has antonyms bad/poor; capitalization carries over.
    CHECK((words[0] == "Bad" || words[0] == "Poor"));
    CHECK(words[1] == "stuff");
}

TEST_CASE("external lexicon file loads") {
    auto lex = perturb::Lexicon::load(std::string(MRFORGE_DATA_DIR) + "/lexicon.tsv");
    CHECK(lex.size() == 10);
    REQUIRE(lex.synonyms("fast") != nullptr);
    CHECK((*lex.synonyms("fast"))[0] == "quick");
    REQUIRE(lex.antonyms("fast") != nullptr);
    CHECK((*lex.antonyms("fast"))[0] == "slow");
    CHECK(lex.synonyms("unknownword") == nullptr);
}

TEST_CASE("character-level edits shift the whitespace-token count by at most intensity") {
    auto texts = corpus_sample(40);
    for (const auto& d : perturb::catalog()) {
        if (d.level != Level::character) continue;
        for (const auto& text : texts) {
            for (int intensity : {1, 2, 4}) {
                std::string out;
                try {
                    out = perturb::apply(d.id, text, intensity, SeededRng(fnv1a64(text)));
                } catch (const EmptyResultError&) {
                    continue;
                }
                auto before = static_cast<long>(text::split_words(text).size());
                auto after = static_cast<long>(text::split_words(out).size());
                CAPTURE(d.id);
                CHECK(std::abs(before - after) <= intensity);
            }
        }
    }
}

TEST_CASE("word-level edits touch at most intensity tokens per unit") {
    auto texts = corpus_sample(40);
    for (const auto& text : texts) {
        for (int intensity : {1, 2}) {
            // Insertions add at most `intensity` tokens.
            auto added = perturb::apply("add_random_word", text, intensity, SeededRng(1));
            auto before = text::split_words(text);
            auto after = text::split_words(added);
            CHECK(after.size() - before.size() == static_cast<std::size_t>(intensity));

            // Replacements keep the count and touch few positions.
            for (const char* id : {"synonym_replace", "antonym_replace", "shuffle_word"}) {
                auto out = perturb::apply(id, text, intensity, SeededRng(2));
                auto words = text::split_words(out);
                REQUIRE(words.size() == before.size());
                int touched = 0;
                for (std::size_t i = 0; i < words.size(); ++i) {
                    if (words[i] != before[i]) ++touched;
                }
                CAPTURE(id);
                CHECK(touched <= intensity);
            }
        }
    }
}

TEST_CASE("preserving perturbations stay closer to the original than altering ones") {
    fitness::TrigramEmbedder embedder;
    auto texts = corpus_sample(100);
    std::vector<double> preserving, altering;
    for (const auto& d : perturb::catalog()) {
        for (const auto& text : texts) {
            std::string out;
            try {
                out = perturb::apply(d.id, text, 1, SeededRng(fnv1a64(d.id) ^ fnv1a64(text)));
            } catch (const EmptyResultError&) {
                continue;
            }
            double pq = fitness::perturbation_quality(text, out, embedder);
            (d.context_type == ContextType::preserving ? preserving : altering).push_back(pq);
        }
    }
    CHECK(median(preserving) >= median(altering));
}

TEST_CASE("catalog_json carries ids and levels") {
    auto j = perturb::catalog_json();
    REQUIRE(j.is_array());
    CHECK(j.size() == perturb::catalog().size());
    CHECK(j[0].contains("id"));
    CHECK(j[0].contains("level"));
    CHECK(j[0].contains("context_type"));
}
