#include "mqcic/engine/engine.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "mqcic/dsl/errors.hpp"
#include "mqcic/dsl/parser.hpp"
#include "mqcic/dsl/printer.hpp"
#include "mqcic/enhance/enhancer.hpp"
#include "mqcic/engine/errors.hpp"
#include "mqcic/llm/answer_extract.hpp"
#include "mqcic/llm/errors.hpp"

namespace mqcic::engine {

const char* to_string(ReasoningMode m) {
    switch (m) {
        case ReasoningMode::LLM_NL: return "llm-nl";
        case ReasoningMode::LLM_SY: return "llm-sy";
        default: return "symbolic";
    }
}

ReasoningMode reasoning_mode_from_string(const std::string& s) {
    if (s == "llm-nl" || s == "LLM_NL" || s == "nl") return ReasoningMode::LLM_NL;
    if (s == "llm-sy" || s == "LLM_SY" || s == "sy") return ReasoningMode::LLM_SY;
    if (s == "symbolic" || s == "Symbolic") return ReasoningMode::Symbolic;
    throw MethodConfigError("unrecognized reasoning mode '" + s + "'");
}

void validate_config(const MethodConfig& cfg) {
    if (cfg.shots != 0 && cfg.shots != 1) throw MethodConfigError("shots must be 0 or 1");
    if (cfg.model_id.empty()) throw MethodConfigError("model_id is empty");
    llm::validate_params(cfg.params);
}

std::string question_for(const PatientInstance& instance, const Indicator& indicator) {
    return instance.question.empty() ? indicator.rule : instance.question;
}

TruthValue parse_final_answer(const std::string& raw) { return llm::extract_final_truth(raw); }

namespace {

std::string lowercase(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::size_t find_last_ci(const std::string& haystack_lower, const std::string& needle_lower) {
    return haystack_lower.rfind(needle_lower);
}

// Last position of an explicit unsure phrase, npos when absent.
std::size_t last_unsure_pos(const std::string& text) {
    static const char* kPhrases[] = {"not sure",  "unsure",        "cannot determine",
                                     "unable to determine", "unknown", "cannot be determined"};
    static const char* kCjk[] = {"不确定", "无法确定", "不能确定"};
    const std::string lower = lowercase(text);
    std::size_t best = std::string::npos;
    for (const char* p : kPhrases) {
        const std::size_t pos = find_last_ci(lower, p);
        if (pos != std::string::npos && (best == std::string::npos || pos > best)) best = pos;
    }
    for (const char* p : kCjk) {
        const std::size_t pos = text.rfind(p);
        if (pos != std::string::npos && (best == std::string::npos || pos > best)) best = pos;
    }
    return best;
}

struct NumberHit {
    double value = 0;
    std::string unit;
    std::size_t pos = std::string::npos;
};

// Last decimal number in the text, with any glued unit ("0%", "3.5mg").
NumberHit last_number(const std::string& text) {
    NumberHit hit;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::size_t start = i;
            bool negative = false;
            if (start > 0 && text[start - 1] == '-') {
                // minus binds only when not glued to an identifier: "a-2" is not -2
                if (start < 2 || !std::isalnum(static_cast<unsigned char>(text[start - 2]))) {
                    negative = true;
                }
            }
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j < text.size() && text[j] == '.' && j + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            std::size_t u = j;
            while (u < text.size() &&
                   (std::isalpha(static_cast<unsigned char>(text[u])) || text[u] == '%'))
                ++u;
            hit.value = std::stod(text.substr(start, j - start)) * (negative ? -1 : 1);
            hit.unit = text.substr(j, u - j);
            hit.pos = start;
            i = u;
        } else {
            ++i;
        }
    }
    return hit;
}

std::string answer_region(const std::string& raw) {
    const std::string lower = lowercase(raw);
    std::size_t pos = lower.rfind("answer:");
    if (pos == std::string::npos) pos = raw.rfind("答案");
    if (pos == std::string::npos) return raw;
    return raw.substr(pos);
}

std::string answer_spec_of(const TemplatedFact& fact) {
    switch (fact.answer_set.kind) {
        case AnswerKind::Boolean: return "True or False";
        case AnswerKind::Numeric:
            return fact.answer_set.unit.empty() ? "a number"
                                                : "a number with unit " + fact.answer_set.unit;
        case AnswerKind::Enum: {
            std::string s = "one of: ";
            for (std::size_t i = 0; i < fact.answer_set.values.size(); ++i) {
                if (i) s += ", ";
                s += fact.answer_set.values[i];
            }
            return s;
        }
    }
    return "";
}

std::string answer_hint_of(const TemplatedFact& fact) {
    switch (fact.answer_set.kind) {
        case AnswerKind::Boolean: return "True/False";
        case AnswerKind::Numeric: return "value" + fact.answer_set.unit;
        default: return "value";
    }
}

std::string fact_label(const TemplatedFact& fact) {
    if (fact.description.empty()) return fact.fact_id;
    return fact.fact_id + ": " + fact.description;
}

std::string bindings_table(const std::vector<TemplatedFact>& facts, const dsl::Bindings& b) {
    std::ostringstream os;
    for (const auto& f : facts) {
        const FactValue v = b.get_or_unknown(f.fact_id);
        os << "  " << f.fact_id << " = " << (v.is_unknown() ? "Not sure" : v.to_display()) << "\n";
    }
    return os.str();
}

// Truth verdict on one "Rule i: ..." line; no marker reads as Unknown.
TruthValue verdict_of_line(const std::string& line) {
    if (lowercase(line).find("unknown") != std::string::npos) return TruthValue::Unknown;
    return llm::extract_final_truth(line);
}

}  // namespace

FactValue parse_fact_answer(const std::string& raw, const TemplatedFact& fact) {
    const std::string region = answer_region(raw);
    const std::size_t unsure = last_unsure_pos(region);

    switch (fact.answer_set.kind) {
        case AnswerKind::Boolean: {
            const auto marker = llm::find_last_truth_marker(region);
            if (!marker) return FactValue::unknown();
            if (unsure != std::string::npos && unsure > marker->pos) return FactValue::unknown();
            if (marker->value == TruthValue::Unknown) return FactValue::unknown();
            return FactValue::boolean(marker->value == TruthValue::True);
        }
        case AnswerKind::Numeric: {
            const NumberHit hit = last_number(region);
            if (hit.pos == std::string::npos) return FactValue::unknown();
            if (unsure != std::string::npos && unsure > hit.pos) return FactValue::unknown();
            // A value in an unrelated unit is not verifiable against the
            // template; units are opaque, never converted.
            if (!unit_matches(fact.answer_set.unit, hit.unit)) return FactValue::unknown();
            return FactValue::number(hit.value, fact.answer_set.unit);
        }
        case AnswerKind::Enum: {
            const std::string lower = lowercase(region);
            std::size_t best_pos = std::string::npos;
            std::string best_value;
            for (const auto& v : fact.answer_set.values) {
                const std::size_t pos = lower.rfind(lowercase(v));
                if (pos != std::string::npos &&
                    (best_pos == std::string::npos || pos > best_pos)) {
                    best_pos = pos;
                    best_value = v;
                }
            }
            if (best_pos == std::string::npos) return FactValue::unknown();
            if (unsure != std::string::npos && unsure > best_pos) return FactValue::unknown();
            return FactValue::enumerated(best_value);
        }
    }
    return FactValue::unknown();
}

Engine::Engine(llm::Gateway& gateway, const enhance::PromptLibrary& prompts)
    : gateway_(gateway), prompts_(prompts) {}

llm::ChatResponse Engine::ask(const MethodConfig& cfg, const std::string& prompt) {
    llm::ChatRequest req;
    req.model_id = cfg.model_id;
    req.messages = {{"user", prompt}};
    req.params = cfg.params;
    return gateway_.complete(req);
}

VerifiedFact Engine::verify_fact(const std::string& note, const TemplatedFact& fact,
                                 const std::string& question, const MethodConfig& cfg,
                                 const Exemplar* exemplar) {
    std::string prompt = prompts_.render("fact_verification",
                                         {{"note", note},
                                          {"question", question},
                                          {"fact_description", fact_label(fact)},
                                          {"answer_spec", answer_spec_of(fact)},
                                          {"answer_hint", answer_hint_of(fact)}});
    if (cfg.shots == 1 && exemplar && !exemplar->fact_example.empty()) {
        prompt = prompts_.render("one_shot_prefix", {{"exemplar", exemplar->fact_example}}) + prompt;
    }
    const llm::ChatResponse resp = ask(cfg, prompt);
    VerifiedFact out;
    out.value = parse_fact_answer(resp.text, fact);
    out.reasoning = resp.text;
    out.latency_ms = resp.latency_ms;
    return out;
}

FactVerificationResult Engine::verify_all_facts(const PatientInstance& instance,
                                                const Indicator& indicator,
                                                const MethodConfig& cfg,
                                                const Exemplar* exemplar) {
    if (!indicator.enhanced())
        throw MethodConfigError("indicator '" + indicator.id +
                                "' has no approved enhancement; CF-IR unavailable");
    if (cfg.batch_facts) return verify_batched(instance, indicator, cfg);

    FactVerificationResult result;
    const std::string question = question_for(instance, indicator);
    for (const auto& fact : indicator.facts) {
        FactVerification detail;
        detail.fact_id = fact.fact_id;
        try {
            // Fresh conversation per fact: no shared context between facts.
            VerifiedFact v = verify_fact(instance.patient_note, fact, question, cfg, exemplar);
            detail.value = v.value;
            detail.reasoning = std::move(v.reasoning);
            result.latency_ms += v.latency_ms;
        } catch (const llm::BackendError& e) {
            detail.value = FactValue::unknown();
            detail.reasoning = std::string("backend error: ") + e.what();
            result.degraded = true;
        }
        result.bindings.set(fact.fact_id, detail.value);
        result.details.push_back(std::move(detail));
    }
    return result;
}

FactVerificationResult Engine::verify_batched(const PatientInstance& instance,
                                              const Indicator& indicator,
                                              const MethodConfig& cfg) {
    std::ostringstream facts_list;
    for (const auto& f : indicator.facts)
        facts_list << f.fact_id << " (" << answer_spec_of(f) << "): " << f.description << "\n";
    const std::string prompt =
        prompts_.render("fact_verification_batch", {{"note", instance.patient_note},
                                                    {"question", question_for(instance, indicator)},
                                                    {"facts_list", facts_list.str()}});
    FactVerificationResult result;
    std::string text;
    try {
        const llm::ChatResponse resp = ask(cfg, prompt);
        text = resp.text;
        result.latency_ms = resp.latency_ms;
    } catch (const llm::BackendError& e) {
        for (const auto& f : indicator.facts) {
            result.bindings.set(f.fact_id, FactValue::unknown());
            result.details.push_back({f.fact_id, FactValue::unknown(),
                                      std::string("backend error: ") + e.what()});
        }
        result.degraded = true;
        return result;
    }

    std::map<std::string, std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string key = line.substr(0, colon);
        key.erase(0, key.find_first_not_of(" \t-*"));
        key.erase(key.find_last_not_of(" \t") + 1);
        lines[key] = line.substr(colon + 1);
    }
    for (const auto& f : indicator.facts) {
        FactVerification detail;
        detail.fact_id = f.fact_id;
        auto it = lines.find(f.fact_id);
        detail.value = it == lines.end() ? FactValue::unknown() : parse_fact_answer(it->second, f);
        detail.reasoning = it == lines.end() ? "no line in batched reply" : it->second;
        result.bindings.set(f.fact_id, detail.value);
        result.details.push_back(std::move(detail));
    }
    return result;
}

RuleReasoningResult Engine::reason_rules(const dsl::Bindings& bindings, const Indicator& indicator,
                                         ReasoningMode mode, const MethodConfig& cfg,
                                         const Exemplar* exemplar) {
    const auto& rules = indicator.logical_rules;
    if (rules.symbolic.empty() && rules.natural_language.empty())
        throw EmptyRuleSetError(indicator.id);

    RuleReasoningResult result;
    if (mode == ReasoningMode::Symbolic) {
        if (rules.symbolic.empty()) throw EmptyRuleSetError(indicator.id);
        std::ostringstream os;
        os << "facts:\n" << bindings_table(indicator.facts, bindings) << "rules:\n";
        for (std::size_t i = 0; i < rules.symbolic.size(); ++i) {
            const dsl::ExprPtr expr = dsl::parse_rule(rules.symbolic[i], indicator.facts);
            const TruthValue v = dsl::evaluate(expr, bindings);
            result.per_rule.push_back(v);
            os << "  " << (i + 1) << ". " << dsl::to_canonical_string(expr) << " -> "
               << to_string(v) << "\n";
        }
        result.explanation = os.str();
        return result;
    }

    const bool nl = mode == ReasoningMode::LLM_NL;
    const auto& rule_texts = nl ? rules.natural_language : rules.symbolic;
    if (rule_texts.empty()) throw EmptyRuleSetError(indicator.id);
    std::ostringstream rules_os;
    for (std::size_t i = 0; i < rule_texts.size(); ++i)
        rules_os << "Rule " << (i + 1) << ": " << rule_texts[i] << "\n";

    std::string prompt = prompts_.render(nl ? "rule_reasoning_nl" : "rule_reasoning_sy",
                                         {{"facts_table", bindings_table(indicator.facts, bindings)},
                                          {"rules", rules_os.str()}});
    if (cfg.shots == 1 && exemplar) {
        const std::string& ex = !exemplar->reasoning_example.empty() ? exemplar->reasoning_example
                                                                     : exemplar->worked_output;
        if (!ex.empty())
            prompt = prompts_.render("one_shot_prefix", {{"exemplar", ex}}) + prompt;
    }

    const llm::ChatResponse resp = ask(cfg, prompt);
    result.explanation = resp.text;
    result.latency_ms = resp.latency_ms;

    // Per-rule verdict lines; a missing or unreadable line is Unknown.
    std::vector<std::string> lines;
    {
        std::istringstream in(resp.text);
        std::string line;
        while (std::getline(in, line)) lines.push_back(line);
    }
    for (std::size_t i = 0; i < rule_texts.size(); ++i) {
        std::ostringstream prefix;
        prefix << "rule " << (i + 1);
        TruthValue v = TruthValue::Unknown;
        for (const auto& l : lines) {
            const std::string lower = lowercase(l);
            const std::size_t at = lower.find(prefix.str());
            if (at == std::string::npos) continue;
            const std::size_t colon = l.find(':', at);
            if (colon == std::string::npos) continue;
            v = verdict_of_line(l.substr(colon + 1));
            break;
        }
        result.per_rule.push_back(v);
    }
    return result;
}

RunRecord Engine::run_instance(const PatientInstance& instance, const Indicator& indicator,
                               const MethodConfig& cfg, const ExemplarStore* exemplars) {
    validate_config(cfg);

    const Exemplar* exemplar = nullptr;
    if (cfg.shots == 1) {
        exemplar = exemplars ? exemplars->find(indicator.id) : nullptr;
        if (!exemplar)
            throw MethodConfigError("one-shot run needs an exemplar for indicator '" +
                                    indicator.id + "'");
        const bool single_prompt = cfg.method == Method::Standard || cfg.method == Method::CoT;
        if (single_prompt && exemplar->worked_output.empty())
            throw MethodConfigError("exemplar for '" + indicator.id + "' has no worked_output");
    }

    try {
        switch (cfg.method) {
            case Method::Standard:
            case Method::CoT:
                return run_single_prompt(instance, indicator, cfg, exemplar);
            case Method::CFIR:
                return run_cfir(instance, indicator, cfg, exemplar);
            case Method::ACFIR: {
                if (indicator.enhanced()) return run_cfir(instance, indicator, cfg, exemplar);
                enhance::Enhancer enhancer(gateway_, prompts_, cfg.model_id, cfg.params);
                enhance::EnhancementDraft draft =
                    enhancer.enhance_indicator(indicator, enhance::EnhanceMode::Auto);
                Indicator enhanced = indicator;
                enhance::apply_draft_to_indicator(enhanced, draft);
                return run_cfir(instance, enhanced, cfg, exemplar);
            }
        }
        throw MethodConfigError("unreachable method");
    } catch (const llm::FixtureMissError&) {
        throw;  // infrastructure defect: replay store incomplete
    } catch (const MethodConfigError&) {
        throw;  // config errors surface before/instead of producing data
    } catch (const Error& e) {
        // A failed instance is an evaluation datum.
        RunRecord r;
        r.instance_id = instance.unique_id;
        r.method = cfg.method;
        r.shots = cfg.shots;
        r.model_id = cfg.model_id;
        r.parsed_answer = TruthValue::Unknown;
        r.degraded = true;
        r.error = e.what();
        return r;
    }
}

RunRecord Engine::run_single_prompt(const PatientInstance& instance, const Indicator& indicator,
                                    const MethodConfig& cfg, const Exemplar* exemplar) {
    RunRecord r;
    r.instance_id = instance.unique_id;
    r.method = cfg.method;
    r.shots = cfg.shots;
    r.model_id = cfg.model_id;

    const std::string instruction =
        !indicator.instruction_standard.empty()
            ? indicator.instruction_standard
            : prompts_.render("default_instruction", {{"rule", indicator.rule}});
    std::string prompt = prompts_.render(cfg.method == Method::CoT ? "cot" : "standard",
                                         {{"instruction", instruction},
                                          {"note", instance.patient_note},
                                          {"question", question_for(instance, indicator)}});
    if (cfg.shots == 1 && exemplar)
        prompt = prompts_.render("one_shot_prefix", {{"exemplar", exemplar->worked_output}}) + prompt;

    const llm::ChatResponse resp = ask(cfg, prompt);
    r.raw_response = resp.text;
    r.parsed_answer = parse_final_answer(resp.text);
    r.latency_ms = resp.latency_ms;
    return r;
}

RunRecord Engine::run_cfir(const PatientInstance& instance, const Indicator& indicator,
                           const MethodConfig& cfg, const Exemplar* exemplar) {
    RunRecord r;
    r.instance_id = instance.unique_id;
    r.method = cfg.method;
    r.shots = cfg.shots;
    r.model_id = cfg.model_id;

    FactVerificationResult facts = verify_all_facts(instance, indicator, cfg, exemplar);
    r.fact_verifications = facts.details;
    r.degraded = facts.degraded;
    r.latency_ms += facts.latency_ms;

    RuleReasoningResult reasoning =
        reason_rules(facts.bindings, indicator, cfg.reasoning_mode, cfg, exemplar);
    r.latency_ms += reasoning.latency_ms;

    const dsl::FinalAnswer final = dsl::final_answer(reasoning.per_rule);
    r.parsed_answer = truth_of(final.answer);
    std::string trace = reasoning.explanation;
    if (!final.definite) trace += "\n(indefinite: an unverified criterion collapsed to False)";
    r.rule_trace = trace;
    r.raw_response = reasoning.explanation;
    return r;
}

}  // namespace mqcic::engine
