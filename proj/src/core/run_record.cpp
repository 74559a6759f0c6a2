#include "mqcic/core/run_record.hpp"

#include <fstream>

#include "mqcic/core/errors.hpp"
#include "mqcic/core/types.hpp"

namespace mqcic {

const char* to_string(Method m) {
    switch (m) {
        case Method::Standard: return "Standard";
        case Method::CoT: return "CoT";
        case Method::CFIR: return "CFIR";
        default: return "ACFIR";
    }
}

Method method_from_string(const std::string& s) {
    if (s == "Standard" || s == "standard") return Method::Standard;
    if (s == "CoT" || s == "cot") return Method::CoT;
    if (s == "CFIR" || s == "cfir" || s == "cf-ir") return Method::CFIR;
    if (s == "ACFIR" || s == "acfir" || s == "acf-ir") return Method::ACFIR;
    throw SchemaError("method", "unrecognized method '" + s + "'");
}

nlohmann::json run_record_to_json(const RunRecord& r) {
    nlohmann::json j{{"instance_id", r.instance_id},
                     {"method", to_string(r.method)},
                     {"shots", r.shots},
                     {"model_id", r.model_id},
                     {"raw_response", r.raw_response},
                     {"parsed_answer", truth_to_json(r.parsed_answer)},
                     {"latency_ms", r.latency_ms}};
    j["fact_verifications"] = nlohmann::json::array();
    for (const auto& fv : r.fact_verifications) {
        j["fact_verifications"].push_back(nlohmann::json{{"fact_id", fv.fact_id},
                                                         {"value", fact_value_to_json(fv.value)},
                                                         {"reasoning", fv.reasoning}});
    }
    if (r.rule_trace) j["rule_trace"] = *r.rule_trace;
    if (r.error_class) j["error_class"] = to_string(*r.error_class);
    if (r.degraded) j["degraded"] = true;
    if (r.error) j["error"] = *r.error;
    return j;
}

RunRecord run_record_from_json(const nlohmann::json& j) {
    RunRecord r;
    r.instance_id = j.at("instance_id").get<std::string>();
    r.method = method_from_string(j.at("method").get<std::string>());
    r.shots = j.value("shots", 0);
    r.model_id = j.value("model_id", std::string{});
    r.raw_response = j.value("raw_response", std::string{});
    r.parsed_answer = truth_from_json(j.at("parsed_answer"));
    if (j.contains("fact_verifications")) {
        for (const auto& fj : j.at("fact_verifications")) {
            FactVerification fv;
            fv.fact_id = fj.at("fact_id").get<std::string>();
            fv.value = fact_value_from_json(fj.at("value"));
            fv.reasoning = fj.value("reasoning", std::string{});
            r.fact_verifications.push_back(std::move(fv));
        }
    }
    if (j.contains("rule_trace")) r.rule_trace = j.at("rule_trace").get<std::string>();
    r.latency_ms = j.value("latency_ms", 0L);
    if (j.contains("error_class")) {
        const std::string c = j.at("error_class").get<std::string>();
        if (c == "A") r.error_class = ErrorClass::A;
        else if (c == "B") r.error_class = ErrorClass::B;
        else if (c == "C") r.error_class = ErrorClass::C;
        else throw SchemaError("error_class", "unrecognized class '" + c + "'");
    }
    r.degraded = j.value("degraded", false);
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    return r;
}

std::vector<RunRecord> load_run_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open");
    std::vector<RunRecord> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(run_record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw IoError(path, "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void save_run_records(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    for (const auto& r : records) {
        out << run_record_to_json(r).dump() << "\n";
        out.flush();  // survive interruption with complete lines
    }
}

}  // namespace mqcic
