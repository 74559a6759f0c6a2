#pragma once

#include <map>
#include <string>
#include <vector>

#include "mqcic/core/errors.hpp"

namespace mqcic::enhance {

/// Versioned prompt assets, loaded from a directory of .txt files keyed by
/// file stem. Prompt text feeds the cache key of every request built from it,
/// so editing an asset invalidates exactly the affected cache entries.
class PromptLibrary {
public:
    static PromptLibrary load(const std::string& dir);
    static PromptLibrary from_map(std::map<std::string, std::string> assets);

    const std::string& get(const std::string& name) const;
    bool has(const std::string& name) const { return assets_.count(name) != 0; }

    /// Replace each "{key}" with its value. Keys not in vars are left alone
    /// (JSON braces in templates stay untouched).
    std::string render(const std::string& name,
                       const std::map<std::string, std::string>& vars) const;

    /// Stable content hash per asset, for run manifests.
    std::map<std::string, std::string> hashes() const;

    std::vector<std::string> names() const;

private:
    std::map<std::string, std::string> assets_;
};

std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& vars);

}  // namespace mqcic::enhance
