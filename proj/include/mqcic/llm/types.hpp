#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mqcic::llm {

struct GenerationParams {
    int max_new_tokens = 1024;
    double repetition_penalty = 1.2;
    double temperature = 0.001;
    std::optional<long> seed;

    bool operator==(const GenerationParams&) const = default;
};

/// Decoding defaults used throughout: near-greedy, long enough for worked
/// reasoning, mild repetition penalty.
GenerationParams default_params();

void validate_params(const GenerationParams& p);

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
    std::string model_id;
    std::vector<ChatMessage> messages;
    GenerationParams params = default_params();
    // Salt mixed into the cache key so repeated experiment runs are cached
    // independently.
    std::string run_tag;
};

struct ChatResponse {
    std::string text;
    long prompt_tokens = 0;
    long completion_tokens = 0;
    long latency_ms = 0;
    std::string backend_id;
};

void validate_request(const ChatRequest& req);

nlohmann::json params_to_json(const GenerationParams& p);
GenerationParams params_from_json(const nlohmann::json& j);
nlohmann::json request_to_json(const ChatRequest& req);
nlohmann::json response_to_json(const ChatResponse& resp);
ChatResponse response_from_json(const nlohmann::json& j);

}  // namespace mqcic::llm
