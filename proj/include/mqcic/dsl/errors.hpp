#pragma once

#include <cstddef>
#include <string>

#include "mqcic/core/errors.hpp"

namespace mqcic::dsl {

class LexError : public Error {
public:
    LexError(std::size_t position_, const std::string& what_)
        : Error("lex error at " + std::to_string(position_) + ": " + what_), position(position_) {}
    std::size_t position;
};

class ParseError : public Error {
public:
    ParseError(std::size_t position_, std::string expected_)
        : Error("parse error at " + std::to_string(position_) + ": expected " + expected_),
          position(position_), expected(std::move(expected_)) {}
    std::size_t position;
    std::string expected;
};

class UnknownFactError : public Error {
public:
    explicit UnknownFactError(std::string fact_id_)
        : Error("unknown fact '" + fact_id_ + "'"), fact_id(std::move(fact_id_)) {}
    std::string fact_id;
};

class TypeCheckError : public Error {
public:
    TypeCheckError(std::string fact_id_, std::string expected_)
        : Error("type error on fact '" + fact_id_ + "': expected " + expected_),
          fact_id(std::move(fact_id_)), expected(std::move(expected_)) {}
    std::string fact_id;
    std::string expected;
};

class UnitMismatchError : public Error {
public:
    UnitMismatchError(std::string fact_id_, const std::string& declared, const std::string& got)
        : Error("unit mismatch on fact '" + fact_id_ + "': declared '" + declared + "', got '" +
                got + "'"),
          fact_id(std::move(fact_id_)) {}
    std::string fact_id;
};

}  // namespace mqcic::dsl
