#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mqcic/core/types.hpp"
#include "mqcic/enhance/prompts.hpp"
#include "mqcic/llm/gateway.hpp"

namespace mqcic::enhance {

enum class DraftStatus { Pending, Approved, Edited, Rejected };
enum class EnhanceMode { SemiAuto, Auto };

const char* to_string(DraftStatus s);
const char* to_string(EnhanceMode m);

/// Output of the three enhancement steps for one indicator, awaiting (or
/// past) human review. Auto drafts are approved by machine but keep their
/// mode so automatic enhancement can be reported as its own configuration.
struct EnhancementDraft {
    std::string indicator_id;
    std::string knowledge;
    std::vector<std::string> decomposed_nl;
    std::vector<std::string> decomposed_sy;
    std::vector<TemplatedFact> templated_facts;
    DraftStatus status = DraftStatus::Pending;
    EnhanceMode mode = EnhanceMode::SemiAuto;
    std::string reviewer_note;
};

nlohmann::json draft_to_json(const EnhancementDraft& d);
EnhancementDraft draft_from_json(const nlohmann::json& j);
std::vector<EnhancementDraft> load_drafts(const std::string& path);
void save_drafts(const std::string& path, const std::vector<EnhancementDraft>& drafts);

/// Parse + coverage + kind validation of a draft's rules against its
/// templates. Throws DecompositionUnparseable / UncoveredFact / KindConflict.
void validate_draft(const EnhancementDraft& d);

struct ReviewDecision {
    enum class Kind { Approve, Edit, Reject };
    Kind kind = Kind::Approve;
    std::optional<EnhancementDraft> edited;  // Edit only

    static ReviewDecision approve() { return {}; }
    static ReviewDecision reject() { return {Kind::Reject, std::nullopt}; }
    static ReviewDecision edit(EnhancementDraft d) { return {Kind::Edit, std::move(d)}; }
};

/// Review gate: Pending drafts only. Edit re-validates before accepting.
EnhancementDraft apply_review(const EnhancementDraft& draft, const ReviewDecision& decision,
                              const std::string& note);

/// Write an Approved/Edited draft's templates and rules into the indicator.
void apply_draft_to_indicator(Indicator& ind, const EnhancementDraft& draft);

/// The three-step rule representation enhancement pipeline.
class Enhancer {
public:
    Enhancer(llm::Gateway& gateway, const PromptLibrary& prompts, std::string model_id,
             llm::GenerationParams params = llm::default_params());

    /// Step 1: recall the background knowledge the rule needs.
    std::string enhance_knowledge(const Indicator& ind);

    /// Step 2: decompose into paired NL/SY rules. Unusable output gets one
    /// repair reprompt (with the parse error appended), then a hard error.
    std::pair<std::vector<std::string>, std::vector<std::string>> decompose_rules(
        const Indicator& ind, const std::string& knowledge);

    /// Step 3: one answer-set template per fact referenced by the rules.
    std::vector<TemplatedFact> templatize_facts(const Indicator& ind,
                                                const std::vector<std::string>& nl,
                                                const std::vector<std::string>& sy);

    /// Full pipeline. SemiAuto -> Pending (review required); Auto skips the
    /// knowledge step and self-approves, tagged mode=Auto.
    EnhancementDraft enhance_indicator(const Indicator& ind, EnhanceMode mode);

private:
    llm::Gateway& gateway_;
    const PromptLibrary& prompts_;
    std::string model_id_;
    llm::GenerationParams params_;

    std::string ask(const std::string& prompt);
};

}  // namespace mqcic::enhance
