#include "mqcic/llm/cache.hpp"

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "mqcic/core/errors.hpp"

namespace fs = std::filesystem;

namespace mqcic::llm {

namespace {

std::uint64_t fnv1a64(const std::string& s, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

}  // namespace

std::string cache_key(const ChatRequest& req) {
    // Canonical serialization: sorted-key JSON of the full logical request.
    const std::string canon = request_to_json(req).dump();
    const std::uint64_t a = fnv1a64(canon, 14695981039346656037ULL);
    const std::uint64_t b = fnv1a64(canon, 0x9E3779B97F4A7C15ULL ^ (a * 0x2545F4914F6CDD1DULL));
    return hex64(a) + hex64(b);
}

ResponseCache::ResponseCache(std::string dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
}

std::optional<ChatResponse> ResponseCache::get(const std::string& key) const {
    const fs::path p = fs::path(dir_) / (key + ".json");
    std::ifstream in(p);
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(p.string(), std::string("corrupt cache entry: ") + e.what());
    }
    return response_from_json(j.contains("response") ? j.at("response") : j);
}

void ResponseCache::put(const std::string& key, const ChatRequest& req,
                        const ChatResponse& resp) const {
    const fs::path final_path = fs::path(dir_) / (key + ".json");
    std::ostringstream tmp_name;
    tmp_name << key << ".tmp." << ::getpid() << "." << std::this_thread::get_id();
    const fs::path tmp_path = fs::path(dir_) / tmp_name.str();
    {
        std::ofstream out(tmp_path, std::ios::trunc);
        if (!out) throw IoError(tmp_path.string(), "cannot open for writing");
        nlohmann::json entry{{"key", key},
                             {"request", request_to_json(req)},
                             {"response", response_to_json(resp)}};
        out << entry.dump(2) << "\n";
    }
    fs::rename(tmp_path, final_path);
}

}  // namespace mqcic::llm
