#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mqcic/core/run_record.hpp"
#include "mqcic/core/types.hpp"
#include "mqcic/eval/judge.hpp"

namespace mqcic::eval {

class EmptySetError : public Error {
public:
    EmptySetError() : Error("empty record set") {}
};

struct InstanceScore {
    std::string instance_id;
    bool correct = false;
    std::optional<double> fc;  // absent = judge coverage gap
    std::optional<double> ff;
    std::optional<ErrorClass> error_class;  // incorrect records only
    bool unresolved_error = false;          // judge failed during classification
};

using InstanceMap = std::map<std::string, const PatientInstance*>;

InstanceMap index_instances(const std::vector<PatientInstance>& instances);

/// Did this record answer its instance correctly? Unknown answers are
/// incorrect.
bool record_correct(const RunRecord& record, const PatientInstance& instance);

/// Micro-average accuracy over the records (each record scored against its
/// instance's label).
double accuracy(const std::vector<RunRecord>& records, const InstanceMap& instances);

/// Per-instance judge-averaged share of gold facts the response states
/// correctly: sum of 0/1 judgments over the m gold facts, divided by m.
/// nullopt when the judge backend failed (coverage gap).
std::optional<double> fact_correctness(const RunRecord& record, const PatientInstance& instance,
                                       BinaryJudge& judge);

/// Same shape, different criterion: is what the response says about each fact
/// grounded in the note's text.
std::optional<double> fact_faithfulness(const RunRecord& record, const PatientInstance& instance,
                                        BinaryJudge& judge);

/// Earliest-error class of an incorrect record. A: a verified/stated fact
/// contradicts the gold facts (exact value check when the record carries
/// verifications, judge-checked otherwise). B: facts fine, conclusion wrong.
/// C: nothing usable (empty output, unparseable answer). nullopt: the judge
/// failed, count as Unresolved.
std::optional<ErrorClass> classify_error(const RunRecord& record, const PatientInstance& instance,
                                         BinaryJudge& judge);

struct ScoreOptions {
    bool with_judge_metrics = true;  // FC/FF (needs a judge backend)
    bool classify_errors = true;
};

std::vector<InstanceScore> score_records(const std::vector<RunRecord>& records,
                                         const InstanceMap& instances, BinaryJudge* judge,
                                         const ScoreOptions& opts = {});

/// Copy resolved error classes back onto the records (index-aligned with the
/// scores), so persisted records carry a class exactly when incorrect.
void apply_error_classes(std::vector<RunRecord>& records,
                         const std::vector<InstanceScore>& scores);

struct IndicatorAggregate {
    long numerator = 0;
    long denominator = 0;
    std::optional<double> proportion;  // absent when denominator is zero
};

/// The indicator's value: instances satisfying the numerator rule over all
/// instances of the indicator (the inputs are assumed pre-filtered to the
/// denominator population). Order-independent.
IndicatorAggregate aggregate_indicator(const std::vector<RunRecord>& records,
                                       const std::vector<PatientInstance>& instances,
                                       const Indicator& indicator);

nlohmann::json score_to_json(const InstanceScore& s);
InstanceScore score_from_json(const nlohmann::json& j);

}  // namespace mqcic::eval
