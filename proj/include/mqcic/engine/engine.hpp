#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mqcic/core/run_record.hpp"
#include "mqcic/core/types.hpp"
#include "mqcic/dsl/eval.hpp"
#include "mqcic/enhance/prompts.hpp"
#include "mqcic/engine/exemplar.hpp"
#include "mqcic/llm/gateway.hpp"

namespace mqcic::engine {

enum class ReasoningMode { LLM_NL, LLM_SY, Symbolic };

const char* to_string(ReasoningMode m);
ReasoningMode reasoning_mode_from_string(const std::string& s);

struct MethodConfig {
    Method method = Method::Standard;
    int shots = 0;  // 0 or 1
    ReasoningMode reasoning_mode = ReasoningMode::Symbolic;
    std::string model_id;
    llm::GenerationParams params = llm::default_params();
    // Off by default: per-fact prompts are context-isolated so facts cannot
    // interfere with one another.
    bool batch_facts = false;
};

void validate_config(const MethodConfig& cfg);

struct VerifiedFact {
    FactValue value;
    std::string reasoning;
    long latency_ms = 0;
};

struct FactVerificationResult {
    dsl::Bindings bindings;
    std::vector<FactVerification> details;  // template order
    bool degraded = false;                  // some backend calls failed, recorded Unknown
    long latency_ms = 0;
};

struct RuleReasoningResult {
    std::vector<TruthValue> per_rule;
    std::string explanation;
    long latency_ms = 0;
};

/// Runs the prompt strategies. CF-IR is two disentangled stages: verify each
/// templated fact against the note in its own conversation, then reason over
/// the verified facts with the logical rules (deterministically via the rule
/// DSL, or with the model in NL/SY form).
class Engine {
public:
    Engine(llm::Gateway& gateway, const enhance::PromptLibrary& prompts);

    VerifiedFact verify_fact(const std::string& note, const TemplatedFact& fact,
                             const std::string& question, const MethodConfig& cfg,
                             const Exemplar* exemplar = nullptr);

    FactVerificationResult verify_all_facts(const PatientInstance& instance,
                                            const Indicator& indicator, const MethodConfig& cfg,
                                            const Exemplar* exemplar = nullptr);

    RuleReasoningResult reason_rules(const dsl::Bindings& bindings, const Indicator& indicator,
                                     ReasoningMode mode, const MethodConfig& cfg,
                                     const Exemplar* exemplar = nullptr);

    RunRecord run_instance(const PatientInstance& instance, const Indicator& indicator,
                           const MethodConfig& cfg, const ExemplarStore* exemplars = nullptr);

private:
    llm::Gateway& gateway_;
    const enhance::PromptLibrary& prompts_;

    llm::ChatResponse ask(const MethodConfig& cfg, const std::string& prompt);
    RunRecord run_single_prompt(const PatientInstance& instance, const Indicator& indicator,
                                const MethodConfig& cfg, const Exemplar* exemplar);
    RunRecord run_cfir(const PatientInstance& instance, const Indicator& indicator,
                       const MethodConfig& cfg, const Exemplar* exemplar);
    FactVerificationResult verify_batched(const PatientInstance& instance,
                                          const Indicator& indicator, const MethodConfig& cfg);
};

/// Last-marker-wins True/False/Unknown extraction (see answer_extract).
TruthValue parse_final_answer(const std::string& raw);

/// Parse a model's fact answer against the template's declared answer set.
/// Explicit unsure markers and anything unextractable map to Unknown.
FactValue parse_fact_answer(const std::string& raw, const TemplatedFact& fact);

/// Resolve the question an instance asks: its own question field, else the
/// indicator's rule.
std::string question_for(const PatientInstance& instance, const Indicator& indicator);

}  // namespace mqcic::engine
