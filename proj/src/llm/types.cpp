#include "mqcic/llm/types.hpp"

#include "mqcic/core/errors.hpp"

namespace mqcic::llm {

GenerationParams default_params() { return GenerationParams{}; }

void validate_params(const GenerationParams& p) {
    if (p.max_new_tokens < 1) throw Error("max_new_tokens must be >= 1");
    if (p.temperature < 0) throw Error("temperature must be >= 0");
}

void validate_request(const ChatRequest& req) {
    validate_params(req.params);
    if (req.messages.empty()) throw Error("chat request has no messages");
    const std::string& first = req.messages.front().role;
    if (first != "system" && first != "user")
        throw Error("first message role must be system or user, got '" + first + "'");
}

nlohmann::json params_to_json(const GenerationParams& p) {
    nlohmann::json j{{"max_new_tokens", p.max_new_tokens},
                     {"repetition_penalty", p.repetition_penalty},
                     {"temperature", p.temperature}};
    if (p.seed) j["seed"] = *p.seed;
    return j;
}

GenerationParams params_from_json(const nlohmann::json& j) {
    GenerationParams p;
    p.max_new_tokens = j.value("max_new_tokens", 1024);
    p.repetition_penalty = j.value("repetition_penalty", 1.2);
    p.temperature = j.value("temperature", 0.001);
    if (j.contains("seed")) p.seed = j.at("seed").get<long>();
    return p;
}

nlohmann::json request_to_json(const ChatRequest& req) {
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : req.messages)
        msgs.push_back(nlohmann::json{{"role", m.role}, {"content", m.content}});
    nlohmann::json j{{"model_id", req.model_id},
                     {"messages", std::move(msgs)},
                     {"params", params_to_json(req.params)}};
    if (!req.run_tag.empty()) j["run_tag"] = req.run_tag;
    return j;
}

nlohmann::json response_to_json(const ChatResponse& resp) {
    return nlohmann::json{{"text", resp.text},
                          {"prompt_tokens", resp.prompt_tokens},
                          {"completion_tokens", resp.completion_tokens},
                          {"latency_ms", resp.latency_ms},
                          {"backend_id", resp.backend_id}};
}

ChatResponse response_from_json(const nlohmann::json& j) {
    ChatResponse resp;
    resp.text = j.value("text", std::string{});
    resp.prompt_tokens = j.value("prompt_tokens", 0L);
    resp.completion_tokens = j.value("completion_tokens", 0L);
    resp.latency_ms = j.value("latency_ms", 0L);
    resp.backend_id = j.value("backend_id", std::string{});
    return resp;
}

}  // namespace mqcic::llm
