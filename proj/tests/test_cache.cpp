#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "mrforge/cache.hpp"
#include "mrforge/errors.hpp"

using namespace mrforge;
using executor::CacheEntry;
using executor::ExecutionCache;

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
    auto dir = fs::temp_directory_path() / "mrforge_cache_tests";
    fs::create_directories(dir);
    auto p = dir / name;
    fs::remove(p);
    return p;
}

CacheEntry entry(const std::string& key, const std::string& out, double eval) {
    CacheEntry e;
    e.key = key;
    e.output_text = out;
    e.eval_result = eval;
    e.exec = {12, 3, out};
    return e;
}

}  // namespace

TEST_CASE("get after put returns the identical entry") {
    ExecutionCache cache;
    auto e = entry("k1", "Positive", 0.5);
    cache.put(e);
    auto hit = cache.get("k1");
    REQUIRE(hit.has_value());
    CHECK(*hit == e);
    CHECK_FALSE(cache.get("unknown").has_value());
}

TEST_CASE("re-putting an identical entry is a no-op; conflicts throw") {
    ExecutionCache cache;
    auto e = entry("k1", "Positive", 0.5);
    cache.put(e);
    cache.put(e);
    CHECK(cache.size() == 1);
    auto conflicting = entry("k1", "Negative", 0.5);
    CHECK_THROWS_AS(cache.put(conflicting), CacheCorruptionError);
}

TEST_CASE("entries persist across reopen") {
    auto path = temp_file("persist.jsonl");
    {
        ExecutionCache cache(path);
        cache.put(entry("a", "out-a", 0.25));
        cache.put(entry("b", "out-b", 0.75));
    }
    ExecutionCache reopened(path);
    CHECK(reopened.size() == 2);
    auto hit = reopened.get("a");
    REQUIRE(hit.has_value());
    CHECK(hit->output_text == "out-a");
    CHECK(hit->eval_result == 0.25);
    CHECK(hit->exec.input_tokens == 12);
    CHECK(reopened.corrupt_records() == 0);
}

TEST_CASE("corrupt records are skipped and counted") {
    auto path = temp_file("corrupt.jsonl");
    {
        ExecutionCache cache(path);
        cache.put(entry("a", "out-a", 0.25));
        cache.put(entry("b", "out-b", 0.75));
    }
    // Flip a byte inside the first record's payload.
    std::string content;
    {
        std::ifstream in(path, std::ios::binary);
        content.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    auto pos = content.find("out-a");
    REQUIRE(pos != std::string::npos);
    content[pos] = 'X';
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << content;
    }
    ExecutionCache reopened(path);
    CHECK(reopened.size() == 1);
    CHECK(reopened.corrupt_records() == 1);
    CHECK_FALSE(reopened.get("a").has_value());
    CHECK(reopened.get("b").has_value());
}

TEST_CASE("make_key is stable and component-sensitive") {
    auto k = ExecutionCache::make_key("m", "sa", "delete_character:1", "i1");
    CHECK(k == ExecutionCache::make_key("m", "sa", "delete_character:1", "i1"));
    CHECK(k != ExecutionCache::make_key("m", "sa", "delete_character:1", "i2"));
    CHECK(k != ExecutionCache::make_key("m", "sa", "delete_character:2", "i1"));
    CHECK(k != ExecutionCache::make_key("m", "ts", "delete_character:1", "i1"));
    CHECK(k.size() == 16);
}
