#pragma once

#include <optional>
#include <string>

#include "mqcic/core/truth.hpp"

namespace mqcic::llm {

/// Last-marker-wins scan for a final True/False verdict. Vocabulary:
/// True/Yes/是/correct -> True, False/No/否 -> False (ASCII words matched
/// case-insensitively on word boundaries, so "incorrect" never fires).
/// 不是 reads as a False marker and 是否 ("whether") as no marker, otherwise
/// plain negation and question echoes would misfire the 是 scan.
/// Total: no marker means Unknown.
TruthValue extract_final_truth(const std::string& text);

/// 0/1 decision for judges: the truth vocabulary plus standalone digits
/// 0 and 1. nullopt when the text contains no decision.
std::optional<int> extract_binary_judgment(const std::string& text);

struct TruthMarker {
    TruthValue value = TruthValue::Unknown;
    std::size_t pos = 0;
};

/// Position of the last truth marker, for callers that race markers against
/// other cues (fact answers race them against "Not sure" phrases).
std::optional<TruthMarker> find_last_truth_marker(const std::string& text);

}  // namespace mqcic::llm
