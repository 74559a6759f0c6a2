#include "mqcic/llm/backend.hpp"

#include <chrono>

#include <httplib.h>
#include <json.hpp>

#include "mqcic/llm/errors.hpp"

namespace mqcic::llm {

HttpBackend::HttpBackend(std::string base_url, std::string api_key, int timeout_seconds)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)),
      timeout_seconds_(timeout_seconds) {}

ChatResponse HttpBackend::complete(const ChatRequest& req) {
    validate_request(req);

    nlohmann::json body;
    body["model"] = req.model_id;
    body["max_tokens"] = req.params.max_new_tokens;
    body["temperature"] = req.params.temperature;
    body["repetition_penalty"] = req.params.repetition_penalty;
    if (req.params.seed) body["seed"] = *req.params.seed;
    body["messages"] = nlohmann::json::array();
    for (const auto& m : req.messages)
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});

    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    const auto start = std::chrono::steady_clock::now();
    auto result = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();

    if (!result) throw BackendError(0, httplib::to_string(result.error()));
    if (result->status != 200) throw BackendError(result->status, result->body);

    try {
        const nlohmann::json j = nlohmann::json::parse(result->body);
        ChatResponse resp;
        resp.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        if (j.contains("usage")) {
            resp.prompt_tokens = j["usage"].value("prompt_tokens", 0L);
            resp.completion_tokens = j["usage"].value("completion_tokens", 0L);
        }
        resp.latency_ms = elapsed;
        resp.backend_id = id();
        return resp;
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(200, std::string("malformed completion payload: ") + e.what());
    }
}

}  // namespace mqcic::llm
