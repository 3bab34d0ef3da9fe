#include "mrforge/cache.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "mrforge/errors.hpp"
#include "mrforge/rng.hpp"

namespace mrforge::executor {

namespace {

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf, 16);
}

nlohmann::ordered_json payload_json(const CacheEntry& e) {
    return {{"key", e.key},
            {"output_text", e.output_text},
            {"eval_result", e.eval_result},
            {"input_tokens", e.exec.input_tokens},
            {"output_tokens", e.exec.output_tokens}};
}

std::string record_line(const CacheEntry& e) {
    nlohmann::ordered_json j = payload_json(e);
    j["checksum"] = hex16(fnv1a64(j.dump()));
    return j.dump();
}

}  // namespace

ExecutionCache::ExecutionCache(const std::filesystem::path& path)
    : path_(path), persistent_(true) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ifstream in(path, std::ios::binary);
    std::string line;
    while (in && std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            nlohmann::ordered_json j = nlohmann::ordered_json::parse(line);
            std::string checksum = j.at("checksum").get<std::string>();
            j.erase("checksum");
            if (hex16(fnv1a64(j.dump())) != checksum) {
                ++corrupt_;
                continue;
            }
            CacheEntry e;
            e.key = j.at("key").get<std::string>();
            e.output_text = j.at("output_text").get<std::string>();
            e.eval_result = j.at("eval_result").get<double>();
            e.exec.input_tokens = j.at("input_tokens").get<std::size_t>();
            e.exec.output_tokens = j.at("output_tokens").get<std::size_t>();
            e.exec.output_text = e.output_text;
            index_[e.key] = std::move(e);
        } catch (const nlohmann::json::exception&) {
            ++corrupt_;
        }
    }
    in.close();
    out_.open(path, std::ios::binary | std::ios::app);
    if (!out_) throw CacheCorruptionError("cannot open cache file for append: " + path.string());
}

std::string ExecutionCache::make_key(std::string_view model_id, std::string_view task_id,
                                     std::string_view cmb_id, std::string_view input_id) {
    std::string blob;
    blob.reserve(model_id.size() + task_id.size() + cmb_id.size() + input_id.size() + 4);
    for (std::string_view part : {model_id, task_id, cmb_id, input_id}) {
        blob.append(part);
        blob.push_back('\x1f');
    }
    return hex16(fnv1a64(blob));
}

std::optional<CacheEntry> ExecutionCache::get(const std::string& key) const {
    std::lock_guard lock(mutex_);
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void ExecutionCache::put(const CacheEntry& entry) {
    std::lock_guard lock(mutex_);
    auto it = index_.find(entry.key);
    if (it != index_.end()) {
        if (it->second == entry) return;  // idempotent re-put
        throw CacheCorruptionError("cache_put: conflicting payload for key " + entry.key);
    }
    index_[entry.key] = entry;
    if (persistent_) {
        out_ << record_line(entry) << '\n';
        out_.flush();
    }
}

std::size_t ExecutionCache::size() const {
    std::lock_guard lock(mutex_);
    return index_.size();
}

}  // namespace mrforge::executor
