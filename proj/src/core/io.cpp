#include "mqcic/core/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "mqcic/core/errors.hpp"
#include "mqcic/dsl/parser.hpp"

namespace mqcic {

namespace {

nlohmann::json read_json_array(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw IoError(path, "expected a top-level JSON array");
    return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << j.dump(2) << "\n";
}

bool is_cjk(char32_t cp) {
    return (cp >= 0x3400 && cp <= 0x4DBF) || (cp >= 0x4E00 && cp <= 0x9FFF) ||
           (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x3040 && cp <= 0x30FF);
}

}  // namespace

std::size_t default_token_count(const std::string& text) {
    std::size_t tokens = 0;
    bool in_word = false;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        char32_t cp = c;
        std::size_t len = 1;
        if (c >= 0xF0) len = 4;
        else if (c >= 0xE0) len = 3;
        else if (c >= 0xC0) len = 2;
        if (len > 1 && i + len <= text.size()) {
            cp = c & (0x3F >> (len - 1));
            for (std::size_t k = 1; k < len; ++k)
                cp = (cp << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
        }
        if (len == 1 && std::isspace(c)) {
            in_word = false;
        } else if (is_cjk(cp)) {
            ++tokens;  // each CJK character is its own token
            in_word = false;
        } else {
            if (!in_word) ++tokens;
            in_word = true;
        }
        i += len;
    }
    return tokens;
}

std::vector<Indicator> load_indicators(const std::string& path) {
    const nlohmann::json arr = read_json_array(path);
    std::vector<Indicator> out;
    out.reserve(arr.size());
    std::unordered_set<std::string> seen;
    std::size_t index = 0;
    for (const auto& j : arr) {
        std::ostringstream fallback;
        fallback << "ind_" << index;
        Indicator ind = indicator_from_json(j, fallback.str());
        if (!seen.insert(ind.id).second)
            throw SchemaError("id", "duplicate", "indicator " + ind.id);
        // Enhanced indicators must carry parseable symbolic rules whose fact
        // references resolve against the template list.
        for (const auto& sy : ind.logical_rules.symbolic) dsl::parse_rule(sy, ind.facts);
        out.push_back(std::move(ind));
        ++index;
    }
    return out;
}

void save_indicators(const std::string& path, const std::vector<Indicator>& indicators) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& ind : indicators) arr.push_back(indicator_to_json(ind));
    write_json(path, arr);
}

std::vector<PatientInstance> load_instances(const std::string& path) {
    const nlohmann::json arr = read_json_array(path);
    std::vector<PatientInstance> out;
    out.reserve(arr.size());
    std::unordered_set<std::string> seen;
    for (const auto& j : arr) {
        PatientInstance inst = instance_from_json(j);
        if (!seen.insert(inst.unique_id).second)
            throw SchemaError("unique_id", "duplicate", "instance " + inst.unique_id);
        out.push_back(std::move(inst));
    }
    return out;
}

void save_instances(const std::string& path, const std::vector<PatientInstance>& instances) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& inst : instances) arr.push_back(instance_to_json(inst));
    write_json(path, arr);
}

CorpusStats corpus_stats(const std::vector<PatientInstance>& instances,
                         const Tokenizer& tokenizer) {
    if (instances.empty()) throw EmptyCorpusError();
    CorpusStats s;
    s.count = instances.size();
    s.min_facts = std::numeric_limits<std::size_t>::max();
    std::size_t total_tokens = 0;
    std::size_t total_facts = 0;
    for (const auto& inst : instances) {
        total_tokens += tokenizer(inst.patient_note);
        const std::size_t n = inst.gold_facts.size();
        total_facts += n;
        s.min_facts = std::min(s.min_facts, n);
        s.max_facts = std::max(s.max_facts, n);
    }
    s.avg_note_tokens = static_cast<double>(total_tokens) / static_cast<double>(s.count);
    s.avg_facts = static_cast<double>(total_facts) / static_cast<double>(s.count);
    return s;
}

const Indicator* find_indicator_for_instance(const std::vector<Indicator>& indicators,
                                             const std::string& unique_id) {
    const Indicator* best = nullptr;
    for (const auto& ind : indicators) {
        if (unique_id.rfind(ind.id, 0) == 0) {
            if (!best || ind.id.size() > best->id.size()) best = &ind;
        }
    }
    return best;
}

void validate_corpus(const std::vector<Indicator>& indicators,
                     const std::vector<PatientInstance>& instances) {
    for (const auto& inst : instances) {
        const Indicator* ind = find_indicator_for_instance(indicators, inst.unique_id);
        if (!ind)
            throw SchemaError("unique_id", "no indicator id prefixes '" + inst.unique_id + "'",
                              "instance " + inst.unique_id);
        for (const auto& gf : inst.gold_facts) {
            if (ind->enhanced() && !ind->find_fact(gf.fact_id))
                throw SchemaError("facts", "fact '" + gf.fact_id + "' not declared by indicator '" +
                                               ind->id + "'",
                                  "instance " + inst.unique_id);
        }
        for (const auto& gl : inst.gold_logic) {
            if (ind->enhanced() &&
                gl.rule_index >= static_cast<int>(ind->logical_rules.symbolic.size()))
                throw SchemaError("logic", "rule_index out of range", "instance " + inst.unique_id);
        }
    }
}

}  // namespace mqcic
