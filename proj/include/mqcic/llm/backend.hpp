#pragma once

#include <functional>
#include <memory>
#include <string>

#include "mqcic/llm/types.hpp"

namespace mqcic::llm {

/// A chat-completion provider. Implementations throw BackendError on failure;
/// the gateway owns retries and caching.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse complete(const ChatRequest& req) = 0;
    virtual std::string id() const = 0;
};

/// OpenAI-compatible chat-completions endpoint (hosted APIs and local
/// vLLM-style servers expose the same shape). Base URL like
/// "http://host:8000"; the path /v1/chat/completions is appended.
class HttpBackend : public ChatBackend {
public:
    HttpBackend(std::string base_url, std::string api_key, int timeout_seconds = 120);
    ChatResponse complete(const ChatRequest& req) override;
    std::string id() const override { return "http:" + base_url_; }

private:
    std::string base_url_;
    std::string api_key_;
    int timeout_seconds_;
};

/// Wraps a function; handy for local model hooks and tests.
class FunctionBackend : public ChatBackend {
public:
    using Fn = std::function<std::string(const ChatRequest&)>;
    explicit FunctionBackend(Fn fn, std::string id = "function")
        : fn_(std::move(fn)), id_(std::move(id)) {}

    ChatResponse complete(const ChatRequest& req) override {
        ChatResponse resp;
        resp.text = fn_(req);
        resp.backend_id = id_;
        return resp;
    }
    std::string id() const override { return id_; }

private:
    Fn fn_;
    std::string id_;
};

}  // namespace mqcic::llm
