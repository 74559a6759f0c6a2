#pragma once

#include <string>

#include "mqcic/core/errors.hpp"

namespace mqcic::engine {

/// Method configuration is unusable for this indicator/instance; raised
/// before any backend call.
class MethodConfigError : public Error {
public:
    explicit MethodConfigError(std::string reason) : Error("method config: " + std::move(reason)) {}
};

class EmptyRuleSetError : public Error {
public:
    explicit EmptyRuleSetError(const std::string& indicator_id)
        : Error("indicator '" + indicator_id + "' has no logical rules") {}
};

}  // namespace mqcic::engine
