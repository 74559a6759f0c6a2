#pragma once

#include <string>

#include <json.hpp>

namespace mqcic {

enum class FactKind { Bool, Num, Enum, Unknown };

/// The typed result of verifying one templated clinical fact.
/// Num carries an opaque unit string ("%", "mg", "" for score-like values);
/// units are compared after normalize_unit, never converted.
struct FactValue {
    FactKind kind = FactKind::Unknown;
    bool b = false;
    double num = 0.0;
    std::string unit;        // Num only
    std::string enum_value;  // Enum only

    static FactValue boolean(bool v) {
        FactValue f;
        f.kind = FactKind::Bool;
        f.b = v;
        return f;
    }
    static FactValue number(double v, std::string unit = {}) {
        FactValue f;
        f.kind = FactKind::Num;
        f.num = v;
        f.unit = std::move(unit);
        return f;
    }
    static FactValue enumerated(std::string v) {
        FactValue f;
        f.kind = FactKind::Enum;
        f.enum_value = std::move(v);
        return f;
    }
    static FactValue unknown() { return {}; }

    bool is_unknown() const { return kind == FactKind::Unknown; }

    bool operator==(const FactValue& o) const;
    bool operator!=(const FactValue& o) const { return !(*this == o); }

    /// Display form: "True", "0%", "stent", "Unknown".
    std::string to_display() const;
};

/// Canonicalize a unit string for comparison. Small fixed table for the units
/// the indicators use; everything else lowercased and compared opaquely.
std::string normalize_unit(const std::string& unit);

/// True when a bound/literal unit is acceptable against a declared unit:
/// either normalizes equal, or the candidate is empty (a bare literal adopts
/// the declared unit). A declared empty unit does not absorb a non-empty one.
bool unit_matches(const std::string& declared, const std::string& candidate);

/// JSON forms. Emitted: Bool -> true/false, Num -> {"value":v,"unit":u},
/// Enum -> "string", Unknown -> null. Accepted additionally: tagged objects
/// {"kind":...} and the literal "Not sure" family for Unknown.
nlohmann::json fact_value_to_json(const FactValue& v);
FactValue fact_value_from_json(const nlohmann::json& j);

}  // namespace mqcic
