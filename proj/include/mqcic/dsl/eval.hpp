#pragma once

#include <map>
#include <string>
#include <vector>

#include "mqcic/core/fact_value.hpp"
#include "mqcic/core/truth.hpp"
#include "mqcic/dsl/ast.hpp"

namespace mqcic::dsl {

/// Verified fact values keyed by fact id. A missing key evaluates as Unknown:
/// fact verification legitimately returns "not found".
class Bindings {
public:
    Bindings() = default;

    void set(std::string fact_id, FactValue value) { values_[std::move(fact_id)] = std::move(value); }
    FactValue get_or_unknown(const std::string& fact_id) const {
        auto it = values_.find(fact_id);
        return it == values_.end() ? FactValue::unknown() : it->second;
    }
    bool contains(const std::string& fact_id) const { return values_.count(fact_id) != 0; }
    std::size_t size() const { return values_.size(); }
    const std::map<std::string, FactValue>& values() const { return values_; }

private:
    std::map<std::string, FactValue> values_;
};

// Kleene strong three-valued connectives.
TruthValue kleene_not(TruthValue v);
TruthValue kleene_and(TruthValue a, TruthValue b);
TruthValue kleene_or(TruthValue a, TruthValue b);

/// Evaluate a bound expression under the bindings. Pure and deterministic.
/// Kleene semantics: And(False, x) = False, Or(True, x) = True,
/// Not(Unknown) = Unknown, any comparison with an Unknown operand is Unknown.
/// A bound Num whose unit cannot normalize to the declared unit raises
/// UnitMismatchError; a bound value of the wrong kind resolves to Unknown.
TruthValue evaluate(const ExprPtr& expr, const Bindings& b);

struct FinalAnswer {
    bool answer = false;
    bool definite = false;
};

/// Conjoin the per-rule truth values with Kleene And and collapse: Unknown
/// becomes answer=false with definite=false (an unverifiable criterion is
/// unmet, flagged as indefinite); True/False pass through definite.
FinalAnswer final_answer(const std::vector<TruthValue>& per_rule);

}  // namespace mqcic::dsl
