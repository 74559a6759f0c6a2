#pragma once

#include <string>

#include "mqcic/core/errors.hpp"

namespace mqcic::llm {

/// Backend call failed (after retries, when the failure was retryable).
/// status 0 means a transport-level failure (timeout, connect error).
class BackendError : public Error {
public:
    BackendError(int status_, std::string body_)
        : Error("backend error (status " + std::to_string(status_) + "): " + body_),
          status(status_), body(std::move(body_)) {}
    int status;
    std::string body;
};

/// Replay-only mode and the request is not in the fixture store.
class FixtureMissError : public Error {
public:
    explicit FixtureMissError(std::string key_)
        : Error("fixture miss: no cached response for key " + key_), key(std::move(key_)) {}
    std::string key;
};

/// The judge's response contained no 0/1 decision.
class UnparseableJudgmentError : public Error {
public:
    explicit UnparseableJudgmentError(std::string raw_)
        : Error("unparseable judgment: " + raw_), raw(std::move(raw_)) {}
    std::string raw;
};

}  // namespace mqcic::llm
