#pragma once

#include <memory>
#include <string>

#include "mqcic/core/errors.hpp"
#include "mqcic/llm/gateway.hpp"

namespace mqcic::cli {

class ConfigError : public Error {
public:
    explicit ConfigError(std::string reason) : Error("config: " + std::move(reason)) {}
};

/// Key/value config file + MQCIC_* env overrides + flags (flags win).
/// replay_only forbids a live backend URL.
struct AppConfig {
    std::string backend_url;
    std::string api_key;
    std::string model;
    std::string judge_model;
    std::string cache_dir;
    std::string data_dir;
    std::string prompt_dir = "assets/prompts";
    int width = 4;
    bool replay_only = false;
    std::string run_tag;

    void validate() const;
};

AppConfig load_config_file(const std::string& path);
void apply_env_overrides(AppConfig& cfg);

/// Build the gateway the config describes: replay-only store, HTTP backend
/// with cache, or cache-only (no URL: every miss is a FixtureMiss).
llm::Gateway make_gateway(const AppConfig& cfg);

}  // namespace mqcic::cli
