#pragma once

#include <stdexcept>
#include <string>

namespace mqcic {

/// Base class for every domain error the library raises.
class Error : public std::runtime_error {
public:
    explicit Error(std::string message) : std::runtime_error(std::move(message)) {}
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& reason)
        : Error("io error: " + path + ": " + reason), path(path), reason(reason) {}
    std::string path;
    std::string reason;
};

/// A record violated the file schema. `context` names the offending record
/// (index or id) when known.
class SchemaError : public Error {
public:
    SchemaError(std::string field_, std::string reason_, std::string context_ = {})
        : Error("schema error: field '" + field_ + "': " + reason_ +
                (context_.empty() ? "" : " (" + context_ + ")")),
          field(std::move(field_)), reason(std::move(reason_)), context(std::move(context_)) {}
    std::string field;
    std::string reason;
    std::string context;
};

class EmptyCorpusError : public Error {
public:
    EmptyCorpusError() : Error("empty corpus") {}
};

}  // namespace mqcic
