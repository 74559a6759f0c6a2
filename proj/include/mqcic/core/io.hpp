#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mqcic/core/types.hpp"

namespace mqcic {

/// Counts tokens for the note-length statistic. Pluggable because the stat is
/// informational; the default counts whitespace-separated runs plus one token
/// per CJK character.
using Tokenizer = std::function<std::size_t(const std::string&)>;

std::size_t default_token_count(const std::string& text);

struct CorpusStats {
    std::size_t count = 0;
    double avg_note_tokens = 0.0;
    std::size_t min_facts = 0;
    std::size_t max_facts = 0;
    double avg_facts = 0.0;
};

/// Load and validate an indicator file (UTF-8 JSON array, Table-7 field
/// names). Records without an `id` get a positional fallback id so the
/// uniqueness invariant is checkable.
std::vector<Indicator> load_indicators(const std::string& path);
void save_indicators(const std::string& path, const std::vector<Indicator>& indicators);

/// Load and validate an instance file (UTF-8 JSON array; "patient note" with
/// a space, "explaination" accepted as alias of "explanation").
std::vector<PatientInstance> load_instances(const std::string& path);
void save_instances(const std::string& path, const std::vector<PatientInstance>& instances);

CorpusStats corpus_stats(const std::vector<PatientInstance>& instances,
                         const Tokenizer& tokenizer = default_token_count);

/// Longest indicator id that prefixes the instance's unique_id; nullptr when
/// none matches.
const Indicator* find_indicator_for_instance(const std::vector<Indicator>& indicators,
                                             const std::string& unique_id);

/// Cross-file validation: every gold fact_id resolves against the owning
/// indicator's templates, and every gold rule_index is in range.
void validate_corpus(const std::vector<Indicator>& indicators,
                     const std::vector<PatientInstance>& instances);

}  // namespace mqcic
