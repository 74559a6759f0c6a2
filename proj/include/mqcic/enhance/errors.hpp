#pragma once

#include <string>

#include "mqcic/core/errors.hpp"

namespace mqcic::enhance {

/// A decomposed rule stayed unusable after the one repair reprompt:
/// unparseable, vacuous (no fact references), or NL/SY length mismatch.
class DecompositionUnparseableError : public Error {
public:
    DecompositionUnparseableError(std::string entry_, std::string reason_)
        : Error("rule decomposition unusable: " + reason_ +
                (entry_.empty() ? "" : " in entry: " + entry_)),
          entry(std::move(entry_)), reason(std::move(reason_)) {}
    std::string entry;
    std::string reason;
};

class UncoveredFactError : public Error {
public:
    UncoveredFactError(std::string fact_id_, std::string detail)
        : Error("fact coverage violated for '" + fact_id_ + "': " + detail),
          fact_id(std::move(fact_id_)) {}
    std::string fact_id;
};

class KindConflictError : public Error {
public:
    KindConflictError(std::string fact_id_, std::string detail)
        : Error("fact kind conflict on '" + fact_id_ + "': " + detail),
          fact_id(std::move(fact_id_)) {}
    std::string fact_id;
};

class InvalidEditError : public Error {
public:
    explicit InvalidEditError(std::string reason_)
        : Error("invalid edit: " + reason_), reason(std::move(reason_)) {}
    std::string reason;
};

class InvalidReviewError : public Error {
public:
    explicit InvalidReviewError(std::string reason_)
        : Error("invalid review: " + reason_), reason(std::move(reason_)) {}
    std::string reason;
};

}  // namespace mqcic::enhance
