#include "mqcic/enhance/enhancer.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "mqcic/dsl/errors.hpp"
#include "mqcic/dsl/parser.hpp"
#include "mqcic/enhance/errors.hpp"
#include "mqcic/llm/errors.hpp"

namespace mqcic::enhance {

const char* to_string(DraftStatus s) {
    switch (s) {
        case DraftStatus::Pending: return "Pending";
        case DraftStatus::Approved: return "Approved";
        case DraftStatus::Edited: return "Edited";
        default: return "Rejected";
    }
}

const char* to_string(EnhanceMode m) { return m == EnhanceMode::SemiAuto ? "SemiAuto" : "Auto"; }

namespace {

DraftStatus status_from_string(const std::string& s) {
    if (s == "Pending") return DraftStatus::Pending;
    if (s == "Approved") return DraftStatus::Approved;
    if (s == "Edited") return DraftStatus::Edited;
    if (s == "Rejected") return DraftStatus::Rejected;
    throw SchemaError("status", "unrecognized draft status '" + s + "'");
}

EnhanceMode mode_from_string(const std::string& s) {
    if (s == "SemiAuto") return EnhanceMode::SemiAuto;
    if (s == "Auto") return EnhanceMode::Auto;
    throw SchemaError("mode", "unrecognized draft mode '" + s + "'");
}

// First fenced ```json block, else the first balanced {...} or [...].
std::string extract_json_block(const std::string& text) {
    const std::size_t fence = text.find("```");
    if (fence != std::string::npos) {
        std::size_t start = text.find('\n', fence);
        const std::size_t end = text.find("```", fence + 3);
        if (start != std::string::npos && end != std::string::npos && start < end)
            return text.substr(start + 1, end - start - 1);
    }
    const std::size_t obj = text.find_first_of("{[");
    if (obj == std::string::npos) return text;
    const char open = text[obj];
    const char close = open == '{' ? '}' : ']';
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = obj; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == open) ++depth;
        else if (c == close) {
            if (--depth == 0) return text.substr(obj, i - obj + 1);
        }
    }
    return text.substr(obj);
}

struct DecompositionCheck {
    std::vector<std::string> nl;
    std::vector<std::string> sy;
};

// Parse + sanity-lint one decomposition reply. Throws
// DecompositionUnparseableError with the offending entry.
DecompositionCheck check_decomposition(const std::string& reply) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(extract_json_block(reply));
    } catch (const nlohmann::json::exception& e) {
        throw DecompositionUnparseableError(reply, std::string("not JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("natural_language") || !j.contains("symbolic"))
        throw DecompositionUnparseableError(reply, "missing natural_language/symbolic lists");
    DecompositionCheck out;
    try {
        out.nl = j.at("natural_language").get<std::vector<std::string>>();
        out.sy = j.at("symbolic").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw DecompositionUnparseableError(reply, std::string("lists not strings: ") + e.what());
    }
    if (out.nl.empty() || out.sy.empty())
        throw DecompositionUnparseableError("", "empty decomposition");
    if (out.nl.size() != out.sy.size()) {
        std::ostringstream os;
        os << "natural_language has " << out.nl.size() << " entries but symbolic has "
           << out.sy.size();
        throw DecompositionUnparseableError("", os.str());
    }
    for (const auto& sy : out.sy) {
        dsl::ExprPtr e;
        try {
            e = dsl::parse_rule_unbound(sy);
        } catch (const Error& pe) {
            throw DecompositionUnparseableError(sy, pe.what());
        }
        // Vacuous rules pass everything or nothing; reject them.
        if (dsl::collect_fact_refs(e).empty())
            throw DecompositionUnparseableError(sy, "rule references no facts");
    }
    return out;
}

void check_kind_against_usage(const TemplatedFact& tf, const dsl::FactUsage& usage) {
    switch (usage.kind) {
        case dsl::UsageKind::Boolean:
            if (tf.answer_set.kind != AnswerKind::Boolean)
                throw KindConflictError(tf.fact_id, "used as boolean but declared otherwise");
            break;
        case dsl::UsageKind::Numeric:
            if (tf.answer_set.kind != AnswerKind::Numeric)
                throw KindConflictError(tf.fact_id,
                                        "used in a numeric comparison but declared otherwise");
            if (!usage.unit.empty() && !unit_matches(tf.answer_set.unit, usage.unit))
                throw KindConflictError(tf.fact_id, "rule unit '" + usage.unit +
                                                        "' does not match template unit '" +
                                                        tf.answer_set.unit + "'");
            break;
        case dsl::UsageKind::EnumLike:
            if (tf.answer_set.kind != AnswerKind::Enum)
                throw KindConflictError(tf.fact_id,
                                        "compared with a string but not declared enum");
            break;
        case dsl::UsageKind::Any:
            break;
    }
}

void validate_rules_against_templates(const std::vector<std::string>& sy,
                                      const std::vector<TemplatedFact>& templates) {
    std::set<std::string> referenced;
    std::map<std::string, dsl::FactUsage> usage;
    for (const auto& rule : sy) {
        dsl::ExprPtr e;
        try {
            e = dsl::parse_rule_unbound(rule);
        } catch (const Error& pe) {
            throw DecompositionUnparseableError(rule, pe.what());
        }
        if (dsl::collect_fact_refs(e).empty())
            throw DecompositionUnparseableError(rule, "rule references no facts");
        for (const auto& id : dsl::collect_fact_refs(e)) referenced.insert(id);
        try {
            for (const auto& [id, u] : dsl::infer_usage(e)) {
                auto& existing = usage[id];
                if (existing.kind == dsl::UsageKind::Any) existing.kind = u.kind;
                else if (u.kind != dsl::UsageKind::Any && existing.kind != u.kind)
                    throw KindConflictError(id, "conflicting usage across rules");
                if (existing.unit.empty()) existing.unit = u.unit;
            }
        } catch (const dsl::TypeCheckError& te) {
            throw KindConflictError(te.fact_id, te.what());
        }
    }

    std::set<std::string> declared;
    for (const auto& tf : templates) {
        validate_templated_fact(tf, "draft");
        if (!declared.insert(tf.fact_id).second)
            throw UncoveredFactError(tf.fact_id, "covered by more than one template");
    }
    for (const auto& id : referenced)
        if (!declared.count(id)) throw UncoveredFactError(id, "referenced by rules, no template");
    for (const auto& id : declared)
        if (!referenced.count(id)) throw UncoveredFactError(id, "template unused by any rule");

    for (const auto& [id, u] : usage) {
        for (const auto& tf : templates)
            if (tf.fact_id == id) check_kind_against_usage(tf, u);
    }

    // Full bind catches the rest (enum membership, cross-fact unit clashes).
    for (const auto& rule : sy) {
        try {
            dsl::parse_rule(rule, templates);
        } catch (const dsl::UnknownFactError& ue) {
            throw UncoveredFactError(ue.fact_id, "referenced by rules, no template");
        } catch (const dsl::TypeCheckError& te) {
            throw KindConflictError(te.fact_id, te.what());
        }
    }
}

}  // namespace

nlohmann::json draft_to_json(const EnhancementDraft& d) {
    nlohmann::json facts = nlohmann::json::array();
    for (const auto& f : d.templated_facts) facts.push_back(templated_fact_to_json(f));
    return nlohmann::json{{"indicator_id", d.indicator_id},
                          {"knowledge", d.knowledge},
                          {"decomposed_nl", d.decomposed_nl},
                          {"decomposed_sy", d.decomposed_sy},
                          {"templated_facts", std::move(facts)},
                          {"status", to_string(d.status)},
                          {"mode", to_string(d.mode)},
                          {"reviewer_note", d.reviewer_note}};
}

EnhancementDraft draft_from_json(const nlohmann::json& j) {
    EnhancementDraft d;
    d.indicator_id = j.at("indicator_id").get<std::string>();
    d.knowledge = j.value("knowledge", std::string{});
    d.decomposed_nl = j.value("decomposed_nl", std::vector<std::string>{});
    d.decomposed_sy = j.value("decomposed_sy", std::vector<std::string>{});
    if (j.contains("templated_facts"))
        for (const auto& fj : j.at("templated_facts"))
            d.templated_facts.push_back(templated_fact_from_json(fj));
    d.status = status_from_string(j.value("status", std::string{"Pending"}));
    d.mode = mode_from_string(j.value("mode", std::string{"SemiAuto"}));
    d.reviewer_note = j.value("reviewer_note", std::string{});
    return d;
}

std::vector<EnhancementDraft> load_drafts(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path, std::string("invalid JSON: ") + e.what());
    }
    std::vector<EnhancementDraft> out;
    for (const auto& dj : j) out.push_back(draft_from_json(dj));
    return out;
}

void save_drafts(const std::string& path, const std::vector<EnhancementDraft>& drafts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : drafts) arr.push_back(draft_to_json(d));
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << arr.dump(2) << "\n";
}

void validate_draft(const EnhancementDraft& d) {
    if (d.decomposed_nl.empty() || d.decomposed_sy.empty())
        throw DecompositionUnparseableError("", "draft has no decomposed rules");
    if (d.decomposed_nl.size() != d.decomposed_sy.size())
        throw DecompositionUnparseableError("", "NL/SY lists differ in length");
    validate_rules_against_templates(d.decomposed_sy, d.templated_facts);
}

EnhancementDraft apply_review(const EnhancementDraft& draft, const ReviewDecision& decision,
                              const std::string& note) {
    if (draft.status != DraftStatus::Pending)
        throw InvalidReviewError("draft for '" + draft.indicator_id + "' is not Pending (" +
                                 to_string(draft.status) + ")");
    switch (decision.kind) {
        case ReviewDecision::Kind::Approve: {
            validate_draft(draft);
            EnhancementDraft out = draft;
            out.status = DraftStatus::Approved;
            out.reviewer_note = note;
            return out;
        }
        case ReviewDecision::Kind::Edit: {
            if (!decision.edited) throw InvalidEditError("edit decision carries no draft");
            EnhancementDraft out = *decision.edited;
            if (out.indicator_id != draft.indicator_id)
                throw InvalidEditError("edited draft targets indicator '" + out.indicator_id +
                                       "', expected '" + draft.indicator_id + "'");
            try {
                validate_draft(out);
            } catch (const Error& e) {
                throw InvalidEditError(e.what());
            }
            out.status = DraftStatus::Edited;
            out.mode = draft.mode;
            out.reviewer_note = note;
            return out;
        }
        case ReviewDecision::Kind::Reject: {
            EnhancementDraft out = draft;
            out.status = DraftStatus::Rejected;
            out.reviewer_note = note;
            return out;
        }
    }
    throw InvalidReviewError("unreachable decision kind");
}

void apply_draft_to_indicator(Indicator& ind, const EnhancementDraft& draft) {
    if (draft.indicator_id != ind.id)
        throw InvalidReviewError("draft targets '" + draft.indicator_id + "', indicator is '" +
                                 ind.id + "'");
    if (draft.status != DraftStatus::Approved && draft.status != DraftStatus::Edited)
        throw InvalidReviewError("only Approved/Edited drafts can be applied (got " +
                                 std::string(to_string(draft.status)) + ")");
    ind.facts = draft.templated_facts;
    ind.logical_rules.natural_language = draft.decomposed_nl;
    ind.logical_rules.symbolic = draft.decomposed_sy;
}

Enhancer::Enhancer(llm::Gateway& gateway, const PromptLibrary& prompts, std::string model_id,
                   llm::GenerationParams params)
    : gateway_(gateway), prompts_(prompts), model_id_(std::move(model_id)),
      params_(std::move(params)) {}

std::string Enhancer::ask(const std::string& prompt) {
    llm::ChatRequest req;
    req.model_id = model_id_;
    req.messages = {{"user", prompt}};
    req.params = params_;
    return gateway_.complete(req).text;
}

std::string Enhancer::enhance_knowledge(const Indicator& ind) {
    if (ind.rule.empty()) throw Error("indicator '" + ind.id + "' has an empty rule");
    std::string context = ind.definition;
    if (!ind.significance.empty()) context += "\n" + ind.significance;
    if (!ind.other.empty()) context += "\n" + ind.other;
    return ask(prompts_.render("knowledge_enhancement", {{"rule", ind.rule}, {"context", context}}));
}

std::pair<std::vector<std::string>, std::vector<std::string>> Enhancer::decompose_rules(
    const Indicator& ind, const std::string& knowledge) {
    if (ind.rule.empty()) throw Error("indicator '" + ind.id + "' has an empty rule");
    const auto prompt_for = [&](const std::string& repair) {
        return prompts_.render("rule_decomposition",
                               {{"rule", ind.rule}, {"knowledge", knowledge}, {"repair", repair}});
    };
    try {
        const auto r = check_decomposition(ask(prompt_for("")));
        return {r.nl, r.sy};
    } catch (const DecompositionUnparseableError& first) {
        // One repair attempt with the failure appended; unbounded loops burn budget.
        std::string repair = "\nYour previous answer could not be used: " +
                             std::string(first.reason) +
                             ". Answer again with only the JSON object.";
        const auto r = check_decomposition(ask(prompt_for(repair)));
        return {r.nl, r.sy};
    }
}

std::vector<TemplatedFact> Enhancer::templatize_facts(const Indicator& ind,
                                                      const std::vector<std::string>& nl,
                                                      const std::vector<std::string>& sy) {
    if (nl.empty() || sy.empty()) throw Error("decomposition missing before templatization");
    std::ostringstream nl_rules, sy_rules;
    for (std::size_t i = 0; i < nl.size(); ++i) nl_rules << (i + 1) << ". " << nl[i] << "\n";
    for (std::size_t i = 0; i < sy.size(); ++i) sy_rules << (i + 1) << ". " << sy[i] << "\n";

    const auto prompt_for = [&](const std::string& repair) {
        return prompts_.render("fact_templatization", {{"rule", ind.rule},
                                                       {"nl_rules", nl_rules.str()},
                                                       {"sy_rules", sy_rules.str()},
                                                       {"repair", repair}});
    };
    const auto parse_reply = [&](const std::string& reply) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(extract_json_block(reply));
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError("templated_facts", std::string("not JSON: ") + e.what());
        }
        if (!j.is_array()) throw SchemaError("templated_facts", "expected a JSON array");
        std::vector<TemplatedFact> out;
        for (const auto& fj : j) out.push_back(templated_fact_from_json(fj));
        return out;
    };

    std::vector<TemplatedFact> templates;
    try {
        templates = parse_reply(ask(prompt_for("")));
        validate_rules_against_templates(sy, templates);
    } catch (const Error& first) {
        std::string repair = "\nYour previous answer could not be used: " +
                             std::string(first.what()) +
                             ". Answer again with only the JSON array.";
        templates = parse_reply(ask(prompt_for(repair)));
        validate_rules_against_templates(sy, templates);
    }
    return templates;
}

EnhancementDraft Enhancer::enhance_indicator(const Indicator& ind, EnhanceMode mode) {
    EnhancementDraft d;
    d.indicator_id = ind.id;
    d.mode = mode;
    try {
        // Auto mode is the fast path: decomposition straight away.
        d.knowledge = mode == EnhanceMode::Auto ? std::string{} : enhance_knowledge(ind);
    } catch (const llm::BackendError& e) {
        throw Error("knowledge enhancement: " + std::string(e.what()));
    }
    try {
        auto [nl, sy] = decompose_rules(ind, d.knowledge);
        d.decomposed_nl = std::move(nl);
        d.decomposed_sy = std::move(sy);
    } catch (const llm::BackendError& e) {
        throw Error("rule decomposition: " + std::string(e.what()));
    }
    try {
        d.templated_facts = templatize_facts(ind, d.decomposed_nl, d.decomposed_sy);
    } catch (const llm::BackendError& e) {
        throw Error("fact templatization: " + std::string(e.what()));
    }
    d.status = mode == EnhanceMode::Auto ? DraftStatus::Approved : DraftStatus::Pending;
    return d;
}

}  // namespace mqcic::enhance
