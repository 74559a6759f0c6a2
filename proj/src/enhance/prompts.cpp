#include "mqcic/enhance/prompts.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace mqcic::enhance {

namespace {

std::string fnv_hex(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex;
    for (int i = 15; i >= 0; --i) os << ((h >> (i * 4)) & 0xF);
    return os.str();
}

}  // namespace

PromptLibrary PromptLibrary::load(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError(dir, "prompt directory does not exist");
    std::map<std::string, std::string> assets;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        std::ifstream in(entry.path());
        if (!in) throw IoError(entry.path().string(), "cannot open");
        std::ostringstream buf;
        buf << in.rdbuf();
        assets[entry.path().stem().string()] = buf.str();
    }
    if (assets.empty()) throw IoError(dir, "no prompt assets (*.txt) found");
    return from_map(std::move(assets));
}

PromptLibrary PromptLibrary::from_map(std::map<std::string, std::string> assets) {
    PromptLibrary lib;
    lib.assets_ = std::move(assets);
    return lib;
}

const std::string& PromptLibrary::get(const std::string& name) const {
    auto it = assets_.find(name);
    if (it == assets_.end()) throw Error("unknown prompt asset '" + name + "'");
    return it->second;
}

std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& vars) {
    std::string out = text;
    for (const auto& [key, value] : vars) {
        const std::string needle = "{" + key + "}";
        std::size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
            pos += value.size();
        }
    }
    return out;
}

std::string PromptLibrary::render(const std::string& name,
                                  const std::map<std::string, std::string>& vars) const {
    return render_template(get(name), vars);
}

std::map<std::string, std::string> PromptLibrary::hashes() const {
    std::map<std::string, std::string> out;
    for (const auto& [name, text] : assets_) out[name] = fnv_hex(text);
    return out;
}

std::vector<std::string> PromptLibrary::names() const {
    std::vector<std::string> out;
    out.reserve(assets_.size());
    for (const auto& [name, _] : assets_) out.push_back(name);
    return out;
}

}  // namespace mqcic::enhance
