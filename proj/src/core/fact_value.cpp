#include "mqcic/core/fact_value.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "mqcic/core/errors.hpp"

namespace mqcic {

bool FactValue::operator==(const FactValue& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case FactKind::Bool: return b == o.b;
        case FactKind::Num: return num == o.num && normalize_unit(unit) == normalize_unit(o.unit);
        case FactKind::Enum: return enum_value == o.enum_value;
        case FactKind::Unknown: return true;
    }
    return false;
}

std::string FactValue::to_display() const {
    switch (kind) {
        case FactKind::Bool: return b ? "True" : "False";
        case FactKind::Num: {
            // Shortest decimal form that reads back to the same double, never
            // scientific notation (the rule lexer reads this form back).
            double intpart;
            if (std::modf(num, &intpart) == 0.0 && std::abs(num) < 1e15)
                return std::to_string(static_cast<long long>(num)) + unit;
            for (int prec = 1; prec <= 17; ++prec) {
                std::ostringstream os;
                os << std::setprecision(prec) << num;
                const std::string s = os.str();
                if (s.find('e') == std::string::npos && s.find('E') == std::string::npos &&
                    std::stod(s) == num)
                    return s + unit;
            }
            std::ostringstream os;
            os << std::fixed << std::setprecision(17) << num;
            return os.str() + unit;
        }
        case FactKind::Enum: return enum_value;
        case FactKind::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string normalize_unit(const std::string& unit) {
    std::string lower;
    lower.reserve(unit.size());
    for (char c : unit) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "percent" || lower == "％") return "%";
    if (lower == "mmhg") return "mmHg";
    return lower;
}

bool unit_matches(const std::string& declared, const std::string& candidate) {
    if (candidate.empty()) return true;  // bare value adopts the declared unit
    return normalize_unit(declared) == normalize_unit(candidate);
}

nlohmann::json fact_value_to_json(const FactValue& v) {
    switch (v.kind) {
        case FactKind::Bool: return v.b;
        case FactKind::Num: return nlohmann::json{{"value", v.num}, {"unit", v.unit}};
        case FactKind::Enum: return v.enum_value;
        case FactKind::Unknown: return nullptr;
    }
    return nullptr;
}

FactValue fact_value_from_json(const nlohmann::json& j) {
    if (j.is_null()) return FactValue::unknown();
    if (j.is_boolean()) return FactValue::boolean(j.get<bool>());
    if (j.is_number()) return FactValue::number(j.get<double>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "Not sure" || s == "not sure" || s == "不确定") return FactValue::unknown();
        return FactValue::enumerated(s);
    }
    if (j.is_object()) {
        if (j.contains("kind")) {
            const std::string kind = j.at("kind").get<std::string>();
            if (kind == "bool") return FactValue::boolean(j.at("value").get<bool>());
            if (kind == "num")
                return FactValue::number(j.at("value").get<double>(), j.value("unit", std::string{}));
            if (kind == "enum") return FactValue::enumerated(j.at("value").get<std::string>());
            if (kind == "unknown") return FactValue::unknown();
            throw SchemaError("kind", "unrecognized fact value kind '" + kind + "'");
        }
        if (j.contains("value")) {
            return FactValue::number(j.at("value").get<double>(), j.value("unit", std::string{}));
        }
    }
    throw SchemaError("value", "unrecognized fact value encoding: " + j.dump());
}

}  // namespace mqcic
