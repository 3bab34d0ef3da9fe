#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "mrforge/executor.hpp"

namespace mrforge::executor {

/// One cached LLM execution, keyed by (model, task, CmbMR canonical id,
/// input id). eval_result stores the pairwise unsatisfied * quality value.
struct CacheEntry {
    std::string key;
    std::string output_text;
    double eval_result = 0.0;
    ExecRecord exec;

    friend bool operator==(const CacheEntry&, const CacheEntry&) = default;
};

/// Append-only execution cache with a per-record checksum. The on-disk form
/// is line-delimited JSON; the in-memory index is rebuilt on open and
/// corrupt records are skipped and counted. Safe for concurrent readers
/// with serialized appends.
class ExecutionCache {
public:
    /// In-memory cache (no persistence).
    ExecutionCache() = default;

    /// Opens or creates a persistent cache file.
    explicit ExecutionCache(const std::filesystem::path& path);

    static std::string make_key(std::string_view model_id, std::string_view task_id,
                                std::string_view cmb_id, std::string_view input_id);

    std::optional<CacheEntry> get(const std::string& key) const;

    /// Stores an entry. Re-putting an identical entry is a no-op; a
    /// conflicting payload for an existing key throws CacheCorruptionError.
    void put(const CacheEntry& entry);

    std::size_t size() const;
    std::size_t corrupt_records() const { return corrupt_; }
    const std::filesystem::path& path() const { return path_; }

private:
    mutable std::mutex mutex_;
    std::unordered_map<std::string, CacheEntry> index_;
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t corrupt_ = 0;
    bool persistent_ = false;
};

}  // namespace mrforge::executor
