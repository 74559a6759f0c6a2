#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mqcic/core/fact_value.hpp"
#include "mqcic/core/truth.hpp"

namespace mqcic {

enum class AnswerKind { Boolean, Numeric, Enum };

/// Declared answer set of a templated fact: Boolean, Numeric with a unit, or
/// a closed enum of string values (>= 2 distinct values).
struct AnswerSetSpec {
    AnswerKind kind = AnswerKind::Boolean;
    std::string unit;                 // Numeric
    std::vector<std::string> values;  // Enum

    static AnswerSetSpec boolean() { return {}; }
    static AnswerSetSpec numeric(std::string unit = {}) {
        AnswerSetSpec s;
        s.kind = AnswerKind::Numeric;
        s.unit = std::move(unit);
        return s;
    }
    static AnswerSetSpec enumeration(std::vector<std::string> values) {
        AnswerSetSpec s;
        s.kind = AnswerKind::Enum;
        s.values = std::move(values);
        return s;
    }

    bool operator==(const AnswerSetSpec&) const = default;
};

/// An atomic, independently verifiable clinical datum extracted from an
/// indicator rule.
struct TemplatedFact {
    std::string fact_id;
    std::string description;
    AnswerSetSpec answer_set;
    bool required = true;

    bool operator==(const TemplatedFact&) const = default;
};

/// Paired natural-language / symbolic decompositions of an indicator rule.
/// Lists are index-aligned and equal length once an indicator is enhanced.
struct LogicalRuleSet {
    std::vector<std::string> natural_language;
    std::vector<std::string> symbolic;

    bool empty() const { return natural_language.empty() && symbolic.empty(); }
    bool operator==(const LogicalRuleSet&) const = default;
};

struct Indicator {
    std::string id;
    std::string definition;
    std::string formula;
    std::string significance;
    std::string other;
    std::string instruction_standard;
    std::string numerator;
    std::string denominator;
    std::string rule;  // the numerator rule question
    std::vector<TemplatedFact> facts;
    LogicalRuleSet logical_rules;
    nlohmann::json extra = nlohmann::json::object();  // unknown fields, preserved

    bool enhanced() const { return !facts.empty() && !logical_rules.empty(); }
    const TemplatedFact* find_fact(const std::string& fact_id) const;
};

struct GoldFact {
    std::string fact_id;
    std::string original_text;  // span quoted from the note
    FactValue gold_value;

    bool operator==(const GoldFact&) const = default;
};

struct GoldLogic {
    int rule_index = 0;
    TruthValue gold_truth = TruthValue::Unknown;

    bool operator==(const GoldLogic&) const = default;
};

struct PatientInstance {
    std::string unique_id;
    std::string patient_note;
    std::string question;  // optional in files; falls back to the indicator rule
    std::string explanation;
    bool label = false;
    std::vector<GoldFact> gold_facts;
    std::vector<GoldLogic> gold_logic;
    nlohmann::json extra = nlohmann::json::object();
    // Spelling the source file used for the explanation field; new instances
    // serialize as "explanation".
    bool uses_explaination_spelling = false;
};

/// Validate one indicator against its type invariants. Enhanced indicators
/// additionally get their symbolic rules parsed (see rule DSL).
void validate_indicator(const Indicator& ind);
void validate_templated_fact(const TemplatedFact& f, const std::string& context);
void validate_instance(const PatientInstance& inst);

/// fact_id lexical rule shared with the rule DSL: [A-Za-z_][A-Za-z0-9_]*
bool is_valid_fact_id(const std::string& s);

/// Label normalization is total over {"True","False","Yes","No",是,否} and
/// JSON booleans; everything else is a SchemaError.
bool normalize_label(const nlohmann::json& raw);

nlohmann::json indicator_to_json(const Indicator& ind);
Indicator indicator_from_json(const nlohmann::json& j, const std::string& fallback_id);
nlohmann::json instance_to_json(const PatientInstance& inst);
PatientInstance instance_from_json(const nlohmann::json& j);

nlohmann::json answer_set_to_json(const AnswerSetSpec& s);
AnswerSetSpec answer_set_from_json(const nlohmann::json& j);
nlohmann::json templated_fact_to_json(const TemplatedFact& f);
TemplatedFact templated_fact_from_json(const nlohmann::json& j);

TruthValue truth_from_json(const nlohmann::json& j);
nlohmann::json truth_to_json(TruthValue v);

}  // namespace mqcic
