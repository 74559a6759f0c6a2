#include "mqcic/core/types.hpp"

#include <set>
#include <unordered_set>

#include "mqcic/core/errors.hpp"

namespace mqcic {

namespace {

// Table-7 / Table-8 field names owned by the loaders; everything else is
// preserved into `extra`.
const std::set<std::string> kIndicatorFields = {
    "id",        "definition",  "formula",       "significance", "other",
    "instruction_standard", "numerator", "denominator", "rule", "facts", "logical_rules"};

const std::set<std::string> kInstanceFields = {
    "unique_id", "patient note", "explaination", "explanation", "label",
    "facts",     "logic",        "question"};

std::string get_string(const nlohmann::json& j, const std::string& field,
                       const std::string& context, bool required) {
    if (!j.contains(field)) {
        if (required) throw SchemaError(field, "missing", context);
        return {};
    }
    const auto& v = j.at(field);
    if (!v.is_string()) throw SchemaError(field, "expected a string", context);
    return v.get<std::string>();
}

}  // namespace

const TemplatedFact* Indicator::find_fact(const std::string& fact_id) const {
    for (const auto& f : facts)
        if (f.fact_id == fact_id) return &f;
    return nullptr;
}

bool is_valid_fact_id(const std::string& s) {
    if (s.empty()) return false;
    auto head = static_cast<unsigned char>(s[0]);
    if (!(std::isalpha(head) || s[0] == '_')) return false;
    for (char c : s) {
        auto u = static_cast<unsigned char>(c);
        if (!(std::isalnum(u) || c == '_')) return false;
    }
    return true;
}

bool normalize_label(const nlohmann::json& raw) {
    if (raw.is_boolean()) return raw.get<bool>();
    if (raw.is_string()) {
        const std::string s = raw.get<std::string>();
        if (s == "True" || s == "Yes" || s == "是") return true;
        if (s == "False" || s == "No" || s == "否") return false;
    }
    throw SchemaError("label", "not a recognizable label: " + raw.dump());
}

void validate_templated_fact(const TemplatedFact& f, const std::string& context) {
    if (!is_valid_fact_id(f.fact_id))
        throw SchemaError("fact_id", "not a valid identifier: '" + f.fact_id + "'", context);
    if (f.answer_set.kind == AnswerKind::Enum) {
        std::unordered_set<std::string> distinct(f.answer_set.values.begin(),
                                                 f.answer_set.values.end());
        if (distinct.size() < 2)
            throw SchemaError("answer_set", "enum needs >= 2 distinct values", context + "/" + f.fact_id);
    }
}

void validate_indicator(const Indicator& ind) {
    if (ind.id.empty()) throw SchemaError("id", "missing", "indicator");
    if (ind.rule.empty()) throw SchemaError("rule", "missing", "indicator " + ind.id);
    for (const auto& f : ind.facts) validate_templated_fact(f, "indicator " + ind.id);
    const auto& lr = ind.logical_rules;
    if (!ind.facts.empty() || !lr.empty()) {
        // Enhanced indicator: both halves present, NL/SY paired.
        if (ind.facts.empty())
            throw SchemaError("facts", "enhanced indicator has no fact templates", "indicator " + ind.id);
        if (lr.natural_language.empty() || lr.symbolic.empty())
            throw SchemaError("logical_rules", "enhanced indicator has no rules", "indicator " + ind.id);
        if (lr.natural_language.size() != lr.symbolic.size())
            throw SchemaError("logical_rules", "natural_language and symbolic lists differ in length",
                              "indicator " + ind.id);
    }
}

void validate_instance(const PatientInstance& inst) {
    if (inst.unique_id.empty()) throw SchemaError("unique_id", "missing", "instance");
    for (const auto& gf : inst.gold_facts) {
        if (!is_valid_fact_id(gf.fact_id))
            throw SchemaError("facts", "bad fact_id '" + gf.fact_id + "'", "instance " + inst.unique_id);
    }
    for (const auto& gl : inst.gold_logic) {
        if (gl.rule_index < 0)
            throw SchemaError("logic", "negative rule_index", "instance " + inst.unique_id);
    }
}

nlohmann::json answer_set_to_json(const AnswerSetSpec& s) {
    switch (s.kind) {
        case AnswerKind::Boolean: return nlohmann::json{{"kind", "bool"}};
        case AnswerKind::Numeric: return nlohmann::json{{"kind", "num"}, {"unit", s.unit}};
        case AnswerKind::Enum: return nlohmann::json{{"kind", "enum"}, {"values", s.values}};
    }
    return nullptr;
}

AnswerSetSpec answer_set_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw SchemaError("answer_set", "expected an object with a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "bool" || kind == "boolean") return AnswerSetSpec::boolean();
    if (kind == "num" || kind == "numeric")
        return AnswerSetSpec::numeric(j.value("unit", std::string{}));
    if (kind == "enum")
        return AnswerSetSpec::enumeration(j.value("values", std::vector<std::string>{}));
    throw SchemaError("answer_set", "unrecognized kind '" + kind + "'");
}

nlohmann::json templated_fact_to_json(const TemplatedFact& f) {
    return nlohmann::json{{"fact_id", f.fact_id},
                          {"description", f.description},
                          {"answer_set", answer_set_to_json(f.answer_set)},
                          {"required", f.required}};
}

TemplatedFact templated_fact_from_json(const nlohmann::json& j) {
    TemplatedFact f;
    f.fact_id = get_string(j, "fact_id", "fact template", true);
    f.description = get_string(j, "description", "fact " + f.fact_id, false);
    if (!j.contains("answer_set")) throw SchemaError("answer_set", "missing", "fact " + f.fact_id);
    f.answer_set = answer_set_from_json(j.at("answer_set"));
    f.required = j.value("required", true);
    return f;
}

TruthValue truth_from_json(const nlohmann::json& j) {
    if (j.is_null()) return TruthValue::Unknown;
    if (j.is_boolean()) return truth_of(j.get<bool>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "True") return TruthValue::True;
        if (s == "False") return TruthValue::False;
        if (s == "Unknown") return TruthValue::Unknown;
    }
    throw SchemaError("truth", "not a truth value: " + j.dump());
}

nlohmann::json truth_to_json(TruthValue v) { return std::string(to_string(v)); }

nlohmann::json indicator_to_json(const Indicator& ind) {
    nlohmann::json j = ind.extra.is_object() ? ind.extra : nlohmann::json::object();
    j["id"] = ind.id;
    j["definition"] = ind.definition;
    j["formula"] = ind.formula;
    j["significance"] = ind.significance;
    j["other"] = ind.other;
    j["instruction_standard"] = ind.instruction_standard;
    j["numerator"] = ind.numerator;
    j["denominator"] = ind.denominator;
    j["rule"] = ind.rule;
    j["facts"] = nlohmann::json::array();
    for (const auto& f : ind.facts) j["facts"].push_back(templated_fact_to_json(f));
    j["logical_rules"] = nlohmann::json{{"natural_language", ind.logical_rules.natural_language},
                                        {"symbolic", ind.logical_rules.symbolic}};
    return j;
}

Indicator indicator_from_json(const nlohmann::json& j, const std::string& fallback_id) {
    if (!j.is_object()) throw SchemaError("record", "indicator record is not an object");
    Indicator ind;
    ind.id = j.contains("id") ? get_string(j, "id", "indicator", true) : fallback_id;
    const std::string ctx = "indicator " + ind.id;
    ind.definition = get_string(j, "definition", ctx, false);
    ind.formula = get_string(j, "formula", ctx, false);
    ind.significance = get_string(j, "significance", ctx, false);
    ind.other = get_string(j, "other", ctx, false);
    ind.instruction_standard = get_string(j, "instruction_standard", ctx, false);
    ind.numerator = get_string(j, "numerator", ctx, false);
    ind.denominator = get_string(j, "denominator", ctx, false);
    ind.rule = get_string(j, "rule", ctx, true);
    if (j.contains("facts")) {
        if (!j.at("facts").is_array()) throw SchemaError("facts", "expected an array", ctx);
        for (const auto& fj : j.at("facts")) ind.facts.push_back(templated_fact_from_json(fj));
    }
    if (j.contains("logical_rules")) {
        const auto& lr = j.at("logical_rules");
        if (!lr.is_object()) throw SchemaError("logical_rules", "expected an object", ctx);
        ind.logical_rules.natural_language =
            lr.value("natural_language", std::vector<std::string>{});
        ind.logical_rules.symbolic = lr.value("symbolic", std::vector<std::string>{});
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!kIndicatorFields.count(it.key())) ind.extra[it.key()] = it.value();
    }
    validate_indicator(ind);
    return ind;
}

nlohmann::json instance_to_json(const PatientInstance& inst) {
    nlohmann::json j = inst.extra.is_object() ? inst.extra : nlohmann::json::object();
    j["unique_id"] = inst.unique_id;
    j["patient note"] = inst.patient_note;
    j[inst.uses_explaination_spelling ? "explaination" : "explanation"] = inst.explanation;
    j["label"] = inst.label;
    if (!inst.question.empty()) j["question"] = inst.question;
    j["facts"] = nlohmann::json::array();
    for (const auto& gf : inst.gold_facts) {
        j["facts"].push_back(nlohmann::json{{"fact_id", gf.fact_id},
                                            {"original_text", gf.original_text},
                                            {"answer", fact_value_to_json(gf.gold_value)}});
    }
    j["logic"] = nlohmann::json::array();
    for (const auto& gl : inst.gold_logic) {
        j["logic"].push_back(
            nlohmann::json{{"rule_index", gl.rule_index}, {"answer", truth_to_json(gl.gold_truth)}});
    }
    return j;
}

PatientInstance instance_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("record", "instance record is not an object");
    PatientInstance inst;
    inst.unique_id = get_string(j, "unique_id", "instance", true);
    const std::string ctx = "instance " + inst.unique_id;
    inst.patient_note = get_string(j, "patient note", ctx, true);
    if (j.contains("explaination")) {
        inst.explanation = get_string(j, "explaination", ctx, false);
        inst.uses_explaination_spelling = true;
    } else {
        inst.explanation = get_string(j, "explanation", ctx, false);
    }
    inst.question = get_string(j, "question", ctx, false);
    if (!j.contains("label")) throw SchemaError("label", "missing", ctx);
    try {
        inst.label = normalize_label(j.at("label"));
    } catch (const SchemaError& e) {
        throw SchemaError(e.field, e.reason, ctx);
    }
    if (j.contains("facts")) {
        if (!j.at("facts").is_array()) throw SchemaError("facts", "expected an array", ctx);
        for (const auto& fj : j.at("facts")) {
            GoldFact gf;
            gf.fact_id = get_string(fj, "fact_id", ctx + "/facts", true);
            gf.original_text = fj.value("original_text", std::string{});
            gf.gold_value =
                fj.contains("answer") ? fact_value_from_json(fj.at("answer")) : FactValue::unknown();
            inst.gold_facts.push_back(std::move(gf));
        }
    }
    if (j.contains("logic")) {
        if (!j.at("logic").is_array()) throw SchemaError("logic", "expected an array", ctx);
        for (const auto& lj : j.at("logic")) {
            GoldLogic gl;
            if (!lj.contains("rule_index")) throw SchemaError("logic", "missing rule_index", ctx);
            gl.rule_index = lj.at("rule_index").get<int>();
            gl.gold_truth =
                lj.contains("answer") ? truth_from_json(lj.at("answer")) : TruthValue::Unknown;
            inst.gold_logic.push_back(gl);
        }
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!kInstanceFields.count(it.key())) inst.extra[it.key()] = it.value();
    }
    validate_instance(inst);
    return inst;
}

}  // namespace mqcic
