#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mqcic/core/fact_value.hpp"
#include "mqcic/core/truth.hpp"

namespace mqcic {

enum class Method { Standard, CoT, CFIR, ACFIR };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

enum class ErrorClass { A, B, C };

inline const char* to_string(ErrorClass c) {
    switch (c) {
        case ErrorClass::A: return "A";
        case ErrorClass::B: return "B";
        default: return "C";
    }
}

struct FactVerification {
    std::string fact_id;
    FactValue value;
    std::string reasoning;

    bool operator==(const FactVerification&) const = default;
};

/// One model response for one instance, with everything needed to score it
/// offline. error_class is filled by the eval suite, only for incorrect
/// records. latency_ms sums the backend-reported latencies of the calls the
/// run made (stored latencies on cache hits, so replay runs are stable).
struct RunRecord {
    std::string instance_id;
    Method method = Method::Standard;
    int shots = 0;
    std::string model_id;
    std::string raw_response;
    TruthValue parsed_answer = TruthValue::Unknown;
    std::vector<FactVerification> fact_verifications;
    std::optional<std::string> rule_trace;
    long latency_ms = 0;
    std::optional<ErrorClass> error_class;
    bool degraded = false;             // some backend calls failed and were recorded as Unknown
    std::optional<std::string> error;  // hard failure note (instance still counts as a datum)
};

nlohmann::json run_record_to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);

std::vector<RunRecord> load_run_records(const std::string& path);
void save_run_records(const std::string& path, const std::vector<RunRecord>& records);

}  // namespace mqcic
