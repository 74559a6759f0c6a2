#pragma once

#include <optional>
#include <string>

#include "mqcic/llm/types.hpp"

namespace mqcic::llm {

/// Content hash over (model_id, params, messages, run_tag) in canonical JSON.
/// Equal logical requests produce equal keys; any field change changes the
/// key. 128-bit FNV-1a, hex.
std::string cache_key(const ChatRequest& req);

/// Append-only directory of JSON files named <key>.json. Entries carry the
/// request alongside the response so committed fixtures are inspectable.
/// Writes are atomic (write temp, rename); last writer wins for identical
/// concurrent misses.
class ResponseCache {
public:
    explicit ResponseCache(std::string dir);

    std::optional<ChatResponse> get(const std::string& key) const;
    void put(const std::string& key, const ChatRequest& req, const ChatResponse& resp) const;

    const std::string& dir() const { return dir_; }

private:
    std::string dir_;
};

}  // namespace mqcic::llm
