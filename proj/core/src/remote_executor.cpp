#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mrforge/errors.hpp"
#include "mrforge/executor.hpp"

namespace mrforge::executor {

RemoteOptions RemoteOptions::from_env() {
    RemoteOptions opts;
    if (const char* e = std::getenv("MRFORGE_ENDPOINT")) opts.endpoint = e;
    if (const char* k = std::getenv("MRFORGE_API_KEY")) opts.api_key = k;
    return opts;
}

RemoteExecutor::RemoteExecutor(RemoteOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty())
        throw ConfigError("remote executor requires an endpoint (MRFORGE_ENDPOINT)");
    std::string rest = options_.endpoint;
    auto scheme = rest.find("://");
    std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
    auto slash = rest.find('/', host_start);
    if (slash == std::string::npos) {
        host_ = rest;
        path_ = "/";
    } else {
        host_ = rest.substr(0, slash);
        path_ = rest.substr(slash);
    }
}

ExecRecord RemoteExecutor::execute(const std::string& model_id, const std::string& input,
                                   const TaskSpec& task, const ExecContext&) {
    nlohmann::ordered_json body = {
        {"model", model_id}, {"instruction", task.instruction}, {"input", input}};
    const std::string payload = body.dump();

    std::string last_error;
    double backoff = options_.backoff_initial_s;
    for (int attempt = 0; attempt < options_.max_attempts; ++attempt) {
        if (attempt > 0 && backoff_enabled_) {
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
            backoff *= 2.0;
        }
        httplib::Client client(host_);
        client.set_connection_timeout(std::chrono::duration<double>(options_.timeout_s));
        client.set_read_timeout(std::chrono::duration<double>(options_.timeout_s));
        httplib::Headers headers;
        if (!options_.api_key.empty())
            headers.emplace("Authorization", "Bearer " + options_.api_key);
        auto res = client.Post(path_, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw MalformedResponseError(std::string("remote response is not JSON: ") + e.what());
        }
        if (!parsed.contains("output") || !parsed["output"].is_string())
            throw MalformedResponseError("remote response lacks string field 'output'");
        ExecRecord rec;
        rec.output_text = parsed["output"].get<std::string>();
        rec.input_tokens = count_tokens(task.instruction) + count_tokens(input);
        rec.output_tokens = count_tokens(rec.output_text);
        return rec;
    }
    throw ExecutorUnavailableError("remote executor failed after " +
                                   std::to_string(options_.max_attempts) +
                                   " attempts: " + last_error);
}

}  // namespace mrforge::executor
