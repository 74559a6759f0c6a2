#include "mqcic/eval/judge.hpp"

#include "mqcic/llm/errors.hpp"

namespace mqcic::eval {

LlmJudge::LlmJudge(llm::Gateway& gateway, std::string judge_model,
                   const enhance::PromptLibrary& prompts)
    : gateway_(gateway), judge_model_(std::move(judge_model)), prompts_(prompts) {}

std::optional<int> LlmJudge::judge(const std::string& criterion_name, const std::string& subject) {
    const std::string& criterion = prompts_.get(criterion_name);
    try {
        return gateway_.judge_binary(judge_model_, criterion, subject);
    } catch (const llm::UnparseableJudgmentError&) {
        unparseable_.fetch_add(1);
        return 0;  // counts as a miss; resampling at near-zero temperature hides brittleness
    } catch (const llm::BackendError&) {
        return std::nullopt;  // coverage gap, reported upstream
    }
}

}  // namespace mqcic::eval
