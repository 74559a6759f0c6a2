#include "mqcic/eval/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "mqcic/core/io.hpp"

namespace mqcic::eval {

namespace {

const PatientInstance& instance_of(const InstanceMap& instances, const std::string& id) {
    auto it = instances.find(id);
    if (it == instances.end()) throw Error("record references unknown instance '" + id + "'");
    return *it->second;
}

// The response text a judge sees: raw output plus any per-fact verification
// claims the run recorded.
std::string render_response(const RunRecord& record) {
    std::ostringstream os;
    os << record.raw_response;
    if (!record.fact_verifications.empty()) {
        os << "\n\nStated clinical facts:\n";
        for (const auto& fv : record.fact_verifications) {
            os << "  " << fv.fact_id << " = "
               << (fv.value.is_unknown() ? "Not sure" : fv.value.to_display()) << "\n";
        }
    }
    return os.str();
}

std::string gold_fact_subject(const GoldFact& gf, const RunRecord& record, bool with_span) {
    std::ostringstream os;
    os << "Gold fact: " << gf.fact_id << " = "
       << (gf.gold_value.is_unknown() ? "Not sure" : gf.gold_value.to_display()) << "\n";
    if (with_span && !gf.original_text.empty())
        os << "Original note text: " << gf.original_text << "\n";
    os << "\nModel response:\n" << render_response(record);
    return os.str();
}

std::optional<double> judge_over_facts(const RunRecord& record, const PatientInstance& instance,
                                       BinaryJudge& judge, const char* criterion, bool with_span) {
    const std::size_t m = instance.gold_facts.size();
    if (m == 0) throw Error("instance '" + instance.unique_id + "' has no gold facts");
    long sum = 0;
    for (const auto& gf : instance.gold_facts) {
        const auto verdict = judge.judge(criterion, gold_fact_subject(gf, record, with_span));
        if (!verdict) return std::nullopt;  // backend failure: report a gap, not a zero
        sum += *verdict;
    }
    return static_cast<double>(sum) / static_cast<double>(m);
}

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

InstanceMap index_instances(const std::vector<PatientInstance>& instances) {
    InstanceMap map;
    for (const auto& inst : instances) map[inst.unique_id] = &inst;
    return map;
}

bool record_correct(const RunRecord& record, const PatientInstance& instance) {
    if (record.parsed_answer == TruthValue::Unknown) return false;
    return (record.parsed_answer == TruthValue::True) == instance.label;
}

double accuracy(const std::vector<RunRecord>& records, const InstanceMap& instances) {
    if (records.empty()) throw EmptySetError();
    long correct = 0;
    for (const auto& r : records)
        if (record_correct(r, instance_of(instances, r.instance_id))) ++correct;
    return static_cast<double>(correct) / static_cast<double>(records.size());
}

std::optional<double> fact_correctness(const RunRecord& record, const PatientInstance& instance,
                                       BinaryJudge& judge) {
    return judge_over_facts(record, instance, judge, kJudgeFactCorrectness, /*with_span=*/false);
}

std::optional<double> fact_faithfulness(const RunRecord& record, const PatientInstance& instance,
                                        BinaryJudge& judge) {
    return judge_over_facts(record, instance, judge, kJudgeFactFaithfulness, /*with_span=*/true);
}

std::optional<ErrorClass> classify_error(const RunRecord& record, const PatientInstance& instance,
                                         BinaryJudge& judge) {
    if (record_correct(record, instance))
        throw Error("classify_error called on a correct record ('" + record.instance_id + "')");

    // Earliest error wins: wrong facts poison everything downstream.
    if (!record.fact_verifications.empty()) {
        for (const auto& gf : instance.gold_facts) {
            FactValue stated = FactValue::unknown();
            for (const auto& fv : record.fact_verifications)
                if (fv.fact_id == gf.fact_id) stated = fv.value;
            if (stated != gf.gold_value) return ErrorClass::A;
        }
    } else if (!blank(record.raw_response) && !instance.gold_facts.empty()) {
        std::ostringstream subject;
        subject << "Gold facts:\n";
        for (const auto& gf : instance.gold_facts) {
            subject << "  " << gf.fact_id << " = "
                    << (gf.gold_value.is_unknown() ? "Not sure" : gf.gold_value.to_display())
                    << "\n";
        }
        subject << "\nModel response:\n" << render_response(record);
        const auto verdict = judge.judge(kJudgeFactContradiction, subject.str());
        if (!verdict) return std::nullopt;  // Unresolved
        if (*verdict == 1) return ErrorClass::A;
    }

    if (blank(record.raw_response) && record.fact_verifications.empty()) return ErrorClass::C;
    if (record.parsed_answer != TruthValue::Unknown) return ErrorClass::B;
    return ErrorClass::C;
}

std::vector<InstanceScore> score_records(const std::vector<RunRecord>& records,
                                         const InstanceMap& instances, BinaryJudge* judge,
                                         const ScoreOptions& opts) {
    std::vector<InstanceScore> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        const PatientInstance& inst = instance_of(instances, r.instance_id);
        InstanceScore s;
        s.instance_id = r.instance_id;
        s.correct = record_correct(r, inst);
        if (judge && opts.with_judge_metrics && !inst.gold_facts.empty()) {
            s.fc = fact_correctness(r, inst, *judge);
            s.ff = fact_faithfulness(r, inst, *judge);
        }
        if (!s.correct && opts.classify_errors && judge) {
            const auto cls = classify_error(r, inst, *judge);
            if (cls) s.error_class = *cls;
            else s.unresolved_error = true;
        }
        out.push_back(std::move(s));
    }
    return out;
}

void apply_error_classes(std::vector<RunRecord>& records,
                         const std::vector<InstanceScore>& scores) {
    if (records.size() != scores.size())
        throw Error("score/record count mismatch while annotating error classes");
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].instance_id != scores[i].instance_id)
            throw Error("score/record order mismatch at '" + records[i].instance_id + "'");
        records[i].error_class = scores[i].error_class;
    }
}

IndicatorAggregate aggregate_indicator(const std::vector<RunRecord>& records,
                                       const std::vector<PatientInstance>& instances,
                                       const Indicator& indicator) {
    IndicatorAggregate agg;
    // Last record per instance wins (reruns append).
    std::map<std::string, const RunRecord*> latest;
    for (const auto& r : records) latest[r.instance_id] = &r;

    for (const auto& inst : instances) {
        if (inst.unique_id.rfind(indicator.id, 0) != 0) continue;
        ++agg.denominator;
        auto it = latest.find(inst.unique_id);
        if (it != latest.end() && it->second->parsed_answer == TruthValue::True) ++agg.numerator;
    }
    if (agg.denominator > 0)
        agg.proportion = static_cast<double>(agg.numerator) / static_cast<double>(agg.denominator);
    return agg;
}

nlohmann::json score_to_json(const InstanceScore& s) {
    nlohmann::json j{{"instance_id", s.instance_id}, {"correct", s.correct}};
    if (s.fc) j["fc"] = *s.fc;
    if (s.ff) j["ff"] = *s.ff;
    if (s.error_class) j["error_class"] = to_string(*s.error_class);
    if (s.unresolved_error) j["unresolved_error"] = true;
    return j;
}

InstanceScore score_from_json(const nlohmann::json& j) {
    InstanceScore s;
    s.instance_id = j.at("instance_id").get<std::string>();
    s.correct = j.at("correct").get<bool>();
    if (j.contains("fc")) s.fc = j.at("fc").get<double>();
    if (j.contains("ff")) s.ff = j.at("ff").get<double>();
    if (j.contains("error_class")) {
        const std::string c = j.at("error_class").get<std::string>();
        s.error_class = c == "A" ? ErrorClass::A : c == "B" ? ErrorClass::B : ErrorClass::C;
    }
    s.unresolved_error = j.value("unresolved_error", false);
    return s;
}

}  // namespace mqcic::eval
