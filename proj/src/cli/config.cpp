#include "mqcic/cli/config.hpp"

#include <cstdlib>
#include <fstream>

#include "mqcic/llm/backend.hpp"

namespace mqcic::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                          (v.front() == '\'' && v.back() == '\'')))
        return v.substr(1, v.size() - 2);
    return v;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("not a boolean: '" + v + "'");
}

}  // namespace

void AppConfig::validate() const {
    if (width < 1) throw ConfigError("width must be >= 1");
    if (replay_only && !backend_url.empty())
        throw ConfigError("replay_only forbids a live backend URL");
    if (replay_only && cache_dir.empty())
        throw ConfigError("replay_only needs a cache directory");
}

AppConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open config");
    AppConfig cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        if (!section.empty()) key = section + "." + key;
        const std::string value = unquote(trim(t.substr(eq + 1)));
        if (key == "backend.url" || key == "backend_url") cfg.backend_url = value;
        else if (key == "backend.api_key" || key == "api_key") cfg.api_key = value;
        else if (key == "model") cfg.model = value;
        else if (key == "judge_model") cfg.judge_model = value;
        else if (key == "cache_dir") cfg.cache_dir = value;
        else if (key == "data_dir") cfg.data_dir = value;
        else if (key == "prompt_dir") cfg.prompt_dir = value;
        else if (key == "width") cfg.width = std::stoi(value);
        else if (key == "replay_only") cfg.replay_only = parse_bool(value);
        else if (key == "run_tag") cfg.run_tag = value;
        else throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return cfg;
}

void apply_env_overrides(AppConfig& cfg) {
    auto env = [](const char* name) -> const char* { return std::getenv(name); };
    if (const char* v = env("MQCIC_BACKEND_URL")) cfg.backend_url = v;
    if (const char* v = env("MQCIC_API_KEY")) cfg.api_key = v;
    if (const char* v = env("MQCIC_MODEL")) cfg.model = v;
    if (const char* v = env("MQCIC_JUDGE_MODEL")) cfg.judge_model = v;
    if (const char* v = env("MQCIC_CACHE_DIR")) cfg.cache_dir = v;
    if (const char* v = env("MQCIC_DATA_DIR")) cfg.data_dir = v;
    if (const char* v = env("MQCIC_PROMPT_DIR")) cfg.prompt_dir = v;
    if (const char* v = env("MQCIC_WIDTH")) cfg.width = std::stoi(v);
    if (const char* v = env("MQCIC_REPLAY_ONLY")) cfg.replay_only = parse_bool(v);
}

llm::Gateway make_gateway(const AppConfig& cfg) {
    cfg.validate();
    if (cfg.replay_only) return llm::Gateway::replay_only(cfg.cache_dir);
    std::shared_ptr<llm::ChatBackend> backend;
    if (!cfg.backend_url.empty())
        backend = std::make_shared<llm::HttpBackend>(cfg.backend_url, cfg.api_key);
    std::optional<std::string> cache;
    if (!cfg.cache_dir.empty()) cache = cfg.cache_dir;
    llm::Gateway gw(std::move(backend), std::move(cache));
    gw.set_run_tag(cfg.run_tag);
    return gw;
}

}  // namespace mqcic::cli
