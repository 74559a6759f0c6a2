#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>

#include "mqcic/enhance/prompts.hpp"
#include "mqcic/llm/gateway.hpp"

namespace mqcic::eval {

// Criterion prompt asset names.
inline constexpr const char* kJudgeFactCorrectness = "judge_fact_correctness";
inline constexpr const char* kJudgeFactFaithfulness = "judge_fact_faithfulness";
inline constexpr const char* kJudgeFactContradiction = "judge_fact_contradiction";

/// Binary judge used by the metrics. Returns 0/1, or nullopt when the judge
/// backend failed (the affected score is reported as a coverage gap, never
/// silently zeroed). Unparseable judgments count as 0 and bump a counter
/// rather than being resampled.
class BinaryJudge {
public:
    virtual ~BinaryJudge() = default;
    virtual std::optional<int> judge(const std::string& criterion_name,
                                     const std::string& subject) = 0;
    long unparseable_count() const { return unparseable_.load(); }

protected:
    std::atomic<long> unparseable_{0};
};

class LlmJudge : public BinaryJudge {
public:
    LlmJudge(llm::Gateway& gateway, std::string judge_model, const enhance::PromptLibrary& prompts);
    std::optional<int> judge(const std::string& criterion_name,
                             const std::string& subject) override;

private:
    llm::Gateway& gateway_;
    std::string judge_model_;
    const enhance::PromptLibrary& prompts_;
};

/// Deterministic judge for tests and fixtures.
class ScriptedJudge : public BinaryJudge {
public:
    using Fn = std::function<std::optional<int>(const std::string&, const std::string&)>;
    explicit ScriptedJudge(Fn fn) : fn_(std::move(fn)) {}
    std::optional<int> judge(const std::string& criterion_name,
                             const std::string& subject) override {
        return fn_(criterion_name, subject);
    }

private:
    Fn fn_;
};

}  // namespace mqcic::eval
